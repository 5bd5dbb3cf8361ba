#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mktsim/types.hpp"

namespace mktsim {

struct BookConfig {
    Price price_step = 1;        // prices must be multiples of this many ticks
    TimeMs expiry_grid_ms = 2000;  // valid-to instants (and rolling lengths) lie on this grid
    TimeMs min_validto_ms = 0;   // hard floor; the session usually imposes a stricter, time-varying one
};

struct QuoteRequest {
    Side side = Side::Buy;
    Price price = 0;
    Volume volume = 0;
    Validity validity;
    AgentId owner = 0;
};

struct SubmitOutcome {
    std::vector<Trade> fills;
    std::optional<QuoteId> resting;       // id of the resting residue, if any
    std::vector<QuoteId> removed_makers;  // maker quotes fully consumed by this submission
};

struct TopOfBook {
    std::optional<std::pair<Price, Volume>> bid;  // best price and aggregate remaining at it
    std::optional<std::pair<Price, Volume>> ask;
};

// Limit order book with two priority regimes.
//
// PriceTime: price, then arrival sequence.
// PriceValidToVolume: price, then furthest effective valid-to, then largest
// remaining volume, then arrival sequence. A rolling quote's effective
// valid-to is now + length at the instant of matching.
//
// Quote lifecycle follows the valid-to discipline: a fixed quote cannot be
// cancelled before its expiry, a rolling quote can never be cancelled without
// first being converted, and expiry instants are quantized to a global grid.
class OrderBook {
public:
    explicit OrderBook(BookConfig cfg = {}) : cfg_(cfg) {}

    const BookConfig& config() const { return cfg_; }

    Result<SubmitOutcome> submit(const QuoteRequest& req, TimeMs now, PriorityRegime regime);
    Result<Ack> cancel(QuoteId id, TimeMs now);
    Result<TimeMs> convert_rolling(QuoteId id, TimeMs now);
    Result<Ack> extend_validity(QuoteId id, TimeMs new_expiry, TimeMs now);

    // Removes every fixed quote with expiry <= now. Rolling quotes never
    // expire. Returns copies of the removed quotes.
    std::vector<Quote> expire(TimeMs now);

    // Removes everything (end-of-session sweep). Returns copies of the removed quotes.
    std::vector<Quote> clear();

    TopOfBook best_bid_ask() const;

    // Total remaining volume with price within +-band of mid. NoMid if either side is empty.
    Result<Volume> depth(double mid_band_fraction) const;

    const Quote* find(QuoteId id) const;
    std::size_t resting_count() const { return quotes_.size(); }
    bool crossed() const;

    // Walk resting quotes in unspecified order.
    void for_each(const std::function<void(const Quote&)>& fn) const;

private:
    using LevelMap = std::map<Price, std::vector<QuoteId>>;

    Quote* best_maker(Side taker_side, Price limit, TimeMs now, PriorityRegime regime);
    void remove_quote(QuoteId id);
    std::vector<QuoteId>& level_of(const Quote& q);

    BookConfig cfg_;
    std::map<QuoteId, Quote> quotes_;
    std::map<Price, std::vector<QuoteId>, std::greater<>> bids_;  // ids in arrival order
    LevelMap asks_;
    std::multimap<TimeMs, QuoteId> expiries_;  // fixed quotes only
    QuoteId next_id_ = 1;
    std::uint64_t next_arrival_ = 1;
};

}  // namespace mktsim
