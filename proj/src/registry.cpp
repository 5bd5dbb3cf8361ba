#include "mktsim/registry.hpp"

#include <algorithm>
#include <cmath>

namespace mktsim {

double LockPolicy::expected_locked_fraction(std::int64_t n) const {
    if (n < 0) n = 0;
    if (n >= cap_days) return 0.0;
    return std::pow(1.0 - daily_unlock_rate, static_cast<double>(n));
}

Money haircut_amount(double haircut_rate, Price price, Money tick_value, Volume locked_sold) {
    // rate carried as an exact parts-per-million integer so the haircut is a
    // rational of the notional, rounded half-up.
    const auto rate_ppm = static_cast<std::int64_t>(std::llround(haircut_rate * 1e6));
    const __int128 notional = static_cast<__int128>(price) * tick_value * locked_sold;
    const __int128 scaled = notional * rate_ppm;
    return static_cast<Money>((scaled + 500000) / 1000000);
}

void ShareRegistry::grant(AgentId owner, const IssuerId& issuer, Volume count) {
    if (count <= 0) return;
    ledgers_[issuer][owner].unlocked += count;
}

Result<Settlement> ShareRegistry::settle_trade(const Trade& trade, const IssuerId& issuer, Day today) {
    auto& ledger = ledgers_[issuer];
    auto sit = ledger.find(trade.seller);
    if (sit == ledger.end()) return Reject::InsufficientHoldings;
    Holding& seller = sit->second;

    // Lots at or past the cap behave as unlocked at settlement time.
    Volume cap_aged = 0;
    for (const auto& lot : seller.locked)
        if (today - lot.lock_day >= policy_.cap_days) cap_aged += lot.count;
    const Volume sellable_unlocked = seller.unlocked + cap_aged;
    const Volume locked_avail = locked_of(seller) - cap_aged;
    if (sellable_unlocked + locked_avail < trade.volume) return Reject::InsufficientHoldings;

    Volume need = trade.volume;
    const Volume from_unlocked = std::min(need, seller.unlocked);
    seller.unlocked -= from_unlocked;
    need -= from_unlocked;

    Volume locked_sold = 0;
    for (auto& lot : seller.locked) {
        if (need == 0) break;
        const Volume take = std::min(need, lot.count);
        lot.count -= take;
        need -= take;
        if (today - lot.lock_day < policy_.cap_days) locked_sold += take;
    }
    std::erase_if(seller.locked, [](const LockedLot& lot) { return lot.count == 0; });

    Settlement s;
    s.notional = static_cast<Money>(trade.price) * tick_value_ * trade.volume;
    s.locked_sold = policy_.enabled ? locked_sold : 0;
    s.haircut = policy_.enabled ? haircut_amount(policy_.haircut_rate, trade.price, tick_value_, locked_sold) : 0;
    s.seller_cash_delta = s.notional - s.haircut;
    s.buyer_cash_delta = -s.notional;
    treasury_[issuer] += s.haircut;

    Holding& buyer = ledger[trade.buyer];
    if (policy_.enabled) {
        if (!buyer.locked.empty() && buyer.locked.back().lock_day == today)
            buyer.locked.back().count += trade.volume;
        else
            buyer.locked.push_back({trade.volume, today});
    } else {
        buyer.unlocked += trade.volume;
    }
    return s;
}

Result<Volume> ShareRegistry::daily_unlock(const IssuerId& issuer, Day today, Rng& rng) {
    auto last = last_unlock_day_.find(issuer);
    if (last != last_unlock_day_.end() && last->second == today) return Reject::CalledTwiceSameDay;
    last_unlock_day_[issuer] = today;

    if (!policy_.enabled) return Volume{0};

    const Volume locked_total = total_locked(issuer);
    const double x = policy_.daily_unlock_rate * static_cast<double>(locked_total);
    Volume target = static_cast<Volume>(std::floor(x));
    const double frac = x - std::floor(x);
    if (frac > 0.0 && rng.bernoulli(frac)) ++target;  // stochastic rounding keeps the long-run rate exact
    target = std::min(target, locked_total);

    if (target > 0) {
        // Selection sampling over the issuer's locked shares, lot-weighted:
        // each share is selected with probability needed/remaining.
        Volume needed = target;
        Volume remaining = locked_total;
        auto& ledger = ledgers_[issuer];
        for (auto& [owner, holding] : ledger) {
            if (needed == 0) break;
            Volume freed_here = 0;
            for (auto& lot : holding.locked) {
                if (needed == 0) break;
                Volume take = 0;
                for (Volume i = 0; i < lot.count && needed > 0; ++i) {
                    if (rng.below(static_cast<std::uint64_t>(remaining)) <
                        static_cast<std::uint64_t>(needed)) {
                        ++take;
                        --needed;
                    }
                    --remaining;
                }
                lot.count -= take;
                freed_here += take;
            }
            holding.unlocked += freed_here;
            std::erase_if(holding.locked, [](const LockedLot& lot) { return lot.count == 0; });
        }
    }

    unlock_log_.push_back({today, locked_total, target, false});
    return target;
}

Volume ShareRegistry::force_unlock(const IssuerId& issuer, Day today) {
    Volume freed = 0;
    auto lit = ledgers_.find(issuer);
    if (lit == ledgers_.end()) return 0;
    for (auto& [owner, holding] : lit->second) {
        for (auto& lot : holding.locked) {
            if (today - lot.lock_day >= policy_.cap_days) {
                holding.unlocked += lot.count;
                freed += lot.count;
                lot.count = 0;
            }
        }
        std::erase_if(holding.locked, [](const LockedLot& lot) { return lot.count == 0; });
    }
    if (freed > 0) unlock_log_.push_back({today, 0, freed, true});
    return freed;
}

HoldingSnapshot ShareRegistry::holdings(AgentId owner, const IssuerId& issuer) const {
    HoldingSnapshot snap;
    auto lit = ledgers_.find(issuer);
    if (lit == ledgers_.end()) return snap;
    auto hit = lit->second.find(owner);
    if (hit == lit->second.end()) return snap;
    snap.unlocked = hit->second.unlocked;
    snap.locked = locked_of(hit->second);
    snap.lots = hit->second.locked;
    return snap;
}

Volume ShareRegistry::total_shares(const IssuerId& issuer) const {
    Volume total = 0;
    auto lit = ledgers_.find(issuer);
    if (lit == ledgers_.end()) return 0;
    for (const auto& [owner, h] : lit->second) total += h.unlocked + locked_of(h);
    return total;
}

Volume ShareRegistry::total_locked(const IssuerId& issuer) const {
    Volume total = 0;
    auto lit = ledgers_.find(issuer);
    if (lit == ledgers_.end()) return 0;
    for (const auto& [owner, h] : lit->second) total += locked_of(h);
    return total;
}

Money ShareRegistry::treasury(const IssuerId& issuer) const {
    auto it = treasury_.find(issuer);
    return it == treasury_.end() ? 0 : it->second;
}

std::vector<AgentId> ShareRegistry::owners(const IssuerId& issuer) const {
    std::vector<AgentId> ids;
    auto lit = ledgers_.find(issuer);
    if (lit == ledgers_.end()) return ids;
    for (const auto& [owner, h] : lit->second)
        if (h.unlocked > 0 || !h.locked.empty()) ids.push_back(owner);
    return ids;
}

Volume ShareRegistry::locked_of(const Holding& h) const {
    Volume total = 0;
    for (const auto& lot : h.locked) total += lot.count;
    return total;
}

}  // namespace mktsim
