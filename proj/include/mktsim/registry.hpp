#pragma once

#include <map>
#include <vector>

#include "mktsim/rng.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

struct LockPolicy {
    bool enabled = true;
    double haircut_rate = 0.10;       // flat on any locked share sold, regardless of age
    double daily_unlock_rate = 0.01;  // fraction of currently locked shares unlocked per day
    int trading_days_per_year = 250;
    int cap_days = 750;               // 3 years: remaining locked shares force-unlock at this age

    // Closed-form locked fraction after n daily draws, (1-r)^n, 0 at the cap.
    double expected_locked_fraction(std::int64_t n) const;
};

struct LockedLot {
    Volume count = 0;
    Day lock_day = 0;
};

struct HoldingSnapshot {
    Volume locked = 0;
    Volume unlocked = 0;
    std::vector<LockedLot> lots;  // locked lots only; unlocked shares are fungible
};

struct Settlement {
    Money notional = 0;           // price * tick_value * volume
    Money haircut = 0;            // credited to the issuer treasury
    Volume locked_sold = 0;
    Money seller_cash_delta = 0;  // notional - haircut
    Money buyer_cash_delta = 0;   // -notional
};

struct UnlockRecord {
    Day day = 0;
    Volume locked_before = 0;
    Volume unlocked = 0;
    bool forced = false;
};

// Share ownership ledger with the locked-share mechanism: shares acquired in
// a trade are locked; each trading day a uniform random selection of the
// currently locked shares is unlocked; sales of still-locked shares pay a
// haircut to the issuer ("negative dividend"); any lot reaching cap_days of
// age unlocks unconditionally.
class ShareRegistry {
public:
    ShareRegistry(LockPolicy policy, Money tick_value) : policy_(policy), tick_value_(tick_value) {}

    const LockPolicy& policy() const { return policy_; }
    Money tick_value() const { return tick_value_; }

    // Endowment grant: unlocked shares, no cash movement.
    void grant(AgentId owner, const IssuerId& issuer, Volume count);

    // Settle one trade dated `today`. Consumes the seller's unlocked shares
    // first (a rational seller minimizes haircut), then locked lots oldest
    // first. Lots at or past the age cap count as unlocked: the three-year
    // haircut is zero even before the end-of-day sweep runs.
    Result<Settlement> settle_trade(const Trade& trade, const IssuerId& issuer, Day today);

    // One draw per issuer per trading day: unlock floor(r*L) shares plus one
    // more with probability frac(r*L), selected uniformly across all locked
    // shares of the issuer.
    Result<Volume> daily_unlock(const IssuerId& issuer, Day today, Rng& rng);

    // Unlock every lot with age >= cap_days.
    Volume force_unlock(const IssuerId& issuer, Day today);

    HoldingSnapshot holdings(AgentId owner, const IssuerId& issuer) const;

    Volume total_shares(const IssuerId& issuer) const;
    Volume total_locked(const IssuerId& issuer) const;
    Money treasury(const IssuerId& issuer) const;

    const std::vector<UnlockRecord>& unlock_log() const { return unlock_log_; }

    // Owners with any holding of the issuer, ascending id.
    std::vector<AgentId> owners(const IssuerId& issuer) const;

private:
    struct Holding {
        Volume unlocked = 0;
        std::vector<LockedLot> locked;  // append order == lock_day order
    };

    Volume locked_of(const Holding& h) const;

    LockPolicy policy_;
    Money tick_value_ = 1;
    std::map<IssuerId, std::map<AgentId, Holding>> ledgers_;
    std::map<IssuerId, Money> treasury_;
    std::map<IssuerId, Day> last_unlock_day_;
    std::vector<UnlockRecord> unlock_log_;
};

// Haircut on a locked notional, rounded half-up to the smallest currency unit.
Money haircut_amount(double haircut_rate, Price price, Money tick_value, Volume locked_sold);

}  // namespace mktsim
