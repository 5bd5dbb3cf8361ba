#include "mktsim/book.hpp"

#include <algorithm>
#include <cassert>

namespace mktsim {

namespace {

// true when a outranks b on the same side at the same price.
bool outranks(const Quote& a, const Quote& b, TimeMs now, PriorityRegime regime) {
    if (regime == PriorityRegime::PriceTime) return a.arrival < b.arrival;
    const TimeMs ea = a.validity.effective_expiry(now);
    const TimeMs eb = b.validity.effective_expiry(now);
    if (ea != eb) return ea > eb;
    if (a.remaining != b.remaining) return a.remaining > b.remaining;
    return a.arrival < b.arrival;
}

}  // namespace

Result<SubmitOutcome> OrderBook::submit(const QuoteRequest& req, TimeMs now, PriorityRegime regime) {
    if (req.price < 1 || req.price % cfg_.price_step != 0) return Reject::GridViolation;
    if (req.volume < 1) return Reject::GridViolation;
    if (req.validity.is_rolling()) {
        if (!on_grid(req.validity.value, cfg_.expiry_grid_ms)) return Reject::GridViolation;
        if (req.validity.value < cfg_.min_validto_ms || req.validity.value < 1)
            return Reject::ValidityTooShort;
    } else {
        if (!on_grid(req.validity.value, cfg_.expiry_grid_ms)) return Reject::GridViolation;
        if (req.validity.value - now < cfg_.min_validto_ms || req.validity.value <= now)
            return Reject::ValidityTooShort;
    }

    SubmitOutcome out;
    Volume remaining = req.volume;
    const bool buying = req.side == Side::Buy;

    while (remaining > 0) {
        Quote* maker = best_maker(req.side, req.price, now, regime);
        if (maker == nullptr) break;
        const Volume fill = std::min(remaining, maker->remaining);
        Trade t;
        t.price = maker->price;  // maker sets the trade price
        t.volume = fill;
        t.buyer = buying ? req.owner : maker->owner;
        t.seller = buying ? maker->owner : req.owner;
        t.time = now;
        t.aggressor = req.side;
        t.maker_quote_id = maker->id;
        t.taker_order_id = next_id_;  // id this submission will carry
        t.self_trade = maker->owner == req.owner;
        out.fills.push_back(t);
        remaining -= fill;
        maker->remaining -= fill;
        if (maker->remaining == 0) {
            out.removed_makers.push_back(maker->id);
            remove_quote(maker->id);
        }
    }

    Quote q;
    q.id = next_id_++;
    q.side = req.side;
    q.price = req.price;
    q.volume = req.volume;
    q.validity = req.validity;
    q.owner = req.owner;
    q.arrival = next_arrival_++;
    q.remaining = remaining;
    q.submit_time = now;

    if (remaining > 0) {
        out.resting = q.id;
        if (!q.validity.is_rolling()) expiries_.emplace(q.validity.value, q.id);
        if (q.side == Side::Buy)
            bids_[q.price].push_back(q.id);
        else
            asks_[q.price].push_back(q.id);
        quotes_.emplace(q.id, q);
    }
    return out;
}

Result<Ack> OrderBook::cancel(QuoteId id, TimeMs now) {
    auto it = quotes_.find(id);
    if (it == quotes_.end()) return Reject::UnknownQuote;
    const Quote& q = it->second;
    // A rolling quote's expiry is always in the future; it must be converted first.
    if (q.validity.is_rolling()) return Reject::RejectedBeforeValidTo;
    if (now < q.validity.value) return Reject::RejectedBeforeValidTo;
    remove_quote(id);
    return Ack{};
}

Result<TimeMs> OrderBook::convert_rolling(QuoteId id, TimeMs now) {
    auto it = quotes_.find(id);
    if (it == quotes_.end()) return Reject::UnknownQuote;
    Quote& q = it->second;
    if (!q.validity.is_rolling()) return Reject::NotRolling;
    const TimeMs expiry = snap_up(now + q.validity.value, cfg_.expiry_grid_ms);
    q.validity = Validity::fixed(expiry);
    expiries_.emplace(expiry, id);
    return expiry;
}

Result<Ack> OrderBook::extend_validity(QuoteId id, TimeMs new_expiry, TimeMs now) {
    (void)now;
    auto it = quotes_.find(id);
    if (it == quotes_.end()) return Reject::UnknownQuote;
    Quote& q = it->second;
    if (q.validity.is_rolling()) return Reject::NotFixed;
    if (!on_grid(new_expiry, cfg_.expiry_grid_ms)) return Reject::GridViolation;
    if (new_expiry <= q.validity.value) return Reject::NotAnExtension;
    auto [lo, hi] = expiries_.equal_range(q.validity.value);
    for (auto e = lo; e != hi; ++e) {
        if (e->second == id) {
            expiries_.erase(e);
            break;
        }
    }
    q.validity = Validity::fixed(new_expiry);
    expiries_.emplace(new_expiry, id);
    return Ack{};
}

std::vector<Quote> OrderBook::expire(TimeMs now) {
    std::vector<Quote> removed;
    while (!expiries_.empty() && expiries_.begin()->first <= now) {
        const QuoteId id = expiries_.begin()->second;
        expiries_.erase(expiries_.begin());
        auto it = quotes_.find(id);
        if (it != quotes_.end()) {
            removed.push_back(it->second);
            remove_quote(id);
        }
    }
    return removed;
}

std::vector<Quote> OrderBook::clear() {
    std::vector<Quote> removed;
    removed.reserve(quotes_.size());
    for (const auto& [id, q] : quotes_) removed.push_back(q);
    quotes_.clear();
    bids_.clear();
    asks_.clear();
    expiries_.clear();
    return removed;
}

TopOfBook OrderBook::best_bid_ask() const {
    TopOfBook top;
    if (!bids_.empty()) {
        Volume total = 0;
        for (QuoteId id : bids_.begin()->second) total += quotes_.at(id).remaining;
        top.bid = {bids_.begin()->first, total};
    }
    if (!asks_.empty()) {
        Volume total = 0;
        for (QuoteId id : asks_.begin()->second) total += quotes_.at(id).remaining;
        top.ask = {asks_.begin()->first, total};
    }
    return top;
}

Result<Volume> OrderBook::depth(double mid_band_fraction) const {
    if (bids_.empty() || asks_.empty()) return Reject::NoMid;
    const double mid = (static_cast<double>(bids_.begin()->first) + static_cast<double>(asks_.begin()->first)) / 2.0;
    const double lo = mid * (1.0 - mid_band_fraction);
    const double hi = mid * (1.0 + mid_band_fraction);
    Volume total = 0;
    for (const auto& [price, ids] : bids_) {
        if (static_cast<double>(price) < lo) break;  // descending
        for (QuoteId id : ids) total += quotes_.at(id).remaining;
    }
    for (const auto& [price, ids] : asks_) {
        if (static_cast<double>(price) > hi) break;  // ascending
        for (QuoteId id : ids) total += quotes_.at(id).remaining;
    }
    return total;
}

const Quote* OrderBook::find(QuoteId id) const {
    auto it = quotes_.find(id);
    return it == quotes_.end() ? nullptr : &it->second;
}

bool OrderBook::crossed() const {
    if (bids_.empty() || asks_.empty()) return false;
    return bids_.begin()->first >= asks_.begin()->first;
}

void OrderBook::for_each(const std::function<void(const Quote&)>& fn) const {
    for (const auto& [id, q] : quotes_) fn(q);
}

Quote* OrderBook::best_maker(Side taker_side, Price limit, TimeMs now, PriorityRegime regime) {
    if (taker_side == Side::Buy) {
        if (asks_.empty() || asks_.begin()->first > limit) return nullptr;
        const auto& ids = asks_.begin()->second;
        Quote* best = nullptr;
        for (QuoteId id : ids) {
            Quote& q = quotes_.at(id);
            if (best == nullptr || outranks(q, *best, now, regime)) best = &q;
        }
        return best;
    }
    if (bids_.empty() || bids_.begin()->first < limit) return nullptr;
    const auto& ids = bids_.begin()->second;
    Quote* best = nullptr;
    for (QuoteId id : ids) {
        Quote& q = quotes_.at(id);
        if (best == nullptr || outranks(q, *best, now, regime)) best = &q;
    }
    return best;
}

void OrderBook::remove_quote(QuoteId id) {
    auto it = quotes_.find(id);
    assert(it != quotes_.end());
    auto& ids = level_of(it->second);
    ids.erase(std::find(ids.begin(), ids.end(), id));
    if (ids.empty()) {
        if (it->second.side == Side::Buy)
            bids_.erase(it->second.price);
        else
            asks_.erase(it->second.price);
    }
    // Stale expiry index entries are skipped in expire().
    quotes_.erase(it);
}

std::vector<QuoteId>& OrderBook::level_of(const Quote& q) {
    if (q.side == Side::Buy) return bids_.at(q.price);
    return asks_.at(q.price);
}

}  // namespace mktsim
