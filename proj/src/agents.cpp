#include "mktsim/agents.hpp"

#include <algorithm>
#include <cmath>

namespace mktsim {

double mm_half_spread(const SpreadComponents& c, TimeMs quote_life_ms, double sigma) {
    return c.handling + c.noncompetitive + c.adverse +
           c.free_option_coeff * static_cast<double>(quote_life_ms) * sigma;
}

double mm_inventory_skew(const SpreadComponents& c, Volume q, Volume q_max) {
    return -c.inventory_coeff * static_cast<double>(q) / static_cast<double>(q_max);
}

namespace {

Price snap_up_price(double x, Price step) {
    auto p = static_cast<Price>(std::ceil(x / static_cast<double>(step))) * step;
    return std::max(p, step);
}

Price snap_down_price(double x, Price step) {
    auto p = static_cast<Price>(std::floor(x / static_cast<double>(step))) * step;
    return std::max(p, step);
}

Price snap_nearest_price(double x, Price step) {
    auto p = static_cast<Price>(std::llround(x / static_cast<double>(step))) * step;
    return std::max(p, step);
}

}  // namespace

MmQuotes mm_quote_prices(double center, const SpreadComponents& c, Volume q, Volume q_max,
                         TimeMs quote_life_ms, double sigma, Price price_step) {
    const double half = mm_half_spread(c, quote_life_ms, sigma);
    const double skewed = center + mm_inventory_skew(c, q, q_max);
    MmQuotes out;
    out.ask = snap_up_price(skewed + half, price_step);
    const Price spread = std::max(snap_up_price(2.0 * half, price_step), price_step);
    out.bid = out.ask - spread;
    if (out.bid < price_step) {
        out.bid = price_step;
        out.ask = out.bid + spread;
    }
    return out;
}

Validity clamp_validity(TimeMs now, TimeMs preferred_ms, TimeMs min_validto, TimeMs grid) {
    const TimeMs span = std::max(preferred_ms, min_validto);
    return Validity::fixed(snap_up(now + span, grid));
}

namespace {

// Tracks cash/share commitments across the actions of one decide() call so a
// single tick cannot overcommit the budget.
struct BudgetTracker {
    Money cash;
    Volume shares;
    Money tick_value;

    bool reserve_buy(Price p, Volume v) {
        const Money need = p * tick_value * v;
        if (need > cash) return false;
        cash -= need;
        return true;
    }
    Volume affordable(Price p) const {
        const Money unit = p * tick_value;
        return unit <= 0 ? 0 : cash / unit;
    }
    bool reserve_sell(Volume v) {
        if (v > shares) return false;
        shares -= v;
        return true;
    }
};

BudgetTracker budget_of(const MarketView& v) {
    return {v.cash_available, v.shares_available, v.tick_value};
}

class ZiAgent final : public Agent {
public:
    using Agent::Agent;

    std::vector<AgentAction> decide(const MarketView& view, Rng& rng) override {
        const auto& p = std::get<ZiParams>(spec_.params);
        std::vector<AgentAction> actions;
        if (p.arrival_prob <= 0.0 || !rng.bernoulli(p.arrival_prob)) return actions;
        const Side side = rng.below(2) == 0 ? Side::Buy : Side::Sell;
        const Price offset = rng.range(-p.band_ticks, p.band_ticks);
        const Price price = snap_nearest_price(static_cast<double>(view.reference_price + offset),
                                               view.price_step);
        Volume vol = p.volume > 0 ? p.volume : view.nms;
        BudgetTracker budget = budget_of(view);
        if (side == Side::Buy)
            vol = std::min(vol, budget.affordable(price));
        else
            vol = std::min(vol, budget.shares);
        if (vol < std::max<Volume>(1, view.min_quote_size)) return actions;
        SubmitAction a{side, price, vol,
                       clamp_validity(view.time, p.validity_ms, view.min_validto, view.expiry_grid)};
        actions.push_back(a);
        return actions;
    }
};

class MarketMakerAgent final : public Agent {
public:
    using Agent::Agent;

    std::vector<AgentAction> decide(const MarketView& view, Rng&) override {
        const auto& p = std::get<MarketMakerParams>(spec_.params);
        std::vector<AgentAction> actions;
        const Volume size = p.size > 0 ? p.size : 0;
        if (size < 1 || p.q_max <= 0) return actions;

        const double center = view.mid() ? *view.mid() : static_cast<double>(view.reference_price);
        const TimeMs life = std::max(p.validity_ms, view.min_validto);
        const Volume q = view.inventory - p.target_inventory;
        const MmQuotes quotes = mm_quote_prices(center, p.components, q, p.q_max, life, p.sigma,
                                                view.price_step);
        BudgetTracker budget = budget_of(view);
        const Validity validity = clamp_validity(view.time, p.validity_ms, view.min_validto, view.expiry_grid);

        if (!live_bid_ && size >= view.min_quote_size && budget.reserve_buy(quotes.bid, size))
            actions.push_back(SubmitAction{Side::Buy, quotes.bid, size, validity});
        if (!live_ask_ && size >= view.min_quote_size && budget.reserve_sell(size))
            actions.push_back(SubmitAction{Side::Sell, quotes.ask, size, validity});
        return actions;
    }

    void on_quote_rested(QuoteId id, const SubmitAction& a) override {
        (a.side == Side::Buy ? live_bid_ : live_ask_) = id;
    }
    void on_quote_removed(QuoteId id, RemovalReason) override {
        if (live_bid_ == id) live_bid_.reset();
        if (live_ask_ == id) live_ask_.reset();
    }

private:
    std::optional<QuoteId> live_bid_;
    std::optional<QuoteId> live_ask_;
};

// Holds a long position proportional to the trailing-return signal: builds it
// with marketable orders while the trend runs and unwinds it as the signal
// fades. No shorting: the target is clamped at zero.
class MomentumAgent final : public Agent {
public:
    using Agent::Agent;

    std::vector<AgentAction> decide(const MarketView& view, Rng&) override {
        const auto& p = std::get<MomentumParams>(spec_.params);
        std::vector<AgentAction> actions;
        if (p.size_scale <= 0.0 || p.max_size < 1) return actions;
        const auto& trades = *view.recent_trades;
        if (trades.size() < static_cast<std::size_t>(p.window) + 1) return actions;
        const double p_now = static_cast<double>(trades.back().price);
        const double p_then = static_cast<double>(trades[trades.size() - 1 - p.window].price);
        const double ret = std::log(p_now / p_then);

        // Schmitt-trigger position target: enter long past the threshold, hold
        // through the dead band, exit fully once the signal fades below half
        // the threshold (or reverses). No shorting.
        Volume target = 0;
        if (view.inventory == 0) {
            if (ret > p.threshold) target = static_cast<Volume>(std::floor(ret * p.size_scale));
        } else if (ret > p.threshold / 2.0) {
            target = std::max(view.inventory,
                              static_cast<Volume>(std::floor(ret * p.size_scale)));
        }
        if (p.max_inventory > 0) target = std::min(target, p.max_inventory);
        const Volume delta = target - view.inventory;
        if (delta == 0) return actions;
        BudgetTracker budget = budget_of(view);

        if (delta > 0) {
            if (!view.best_ask) return actions;
            const Price limit = view.best_ask->first + p.slip_ticks * view.price_step;
            const Volume size = std::min({delta, p.max_size, budget.affordable(limit)});
            if (size < std::max<Volume>(1, view.min_quote_size)) return actions;
            actions.push_back(SubmitAction{Side::Buy, limit, size,
                                           clamp_validity(view.time, p.validity_ms, view.min_validto,
                                                          view.expiry_grid)});
        } else {
            if (!view.best_bid) return actions;
            Volume size = std::min({-delta, p.max_size, budget.shares});
            if (p.haircut_aware && view.lock_enabled) {
                // Selling locked shares pays haircut_rate of the proceeds; when
                // that exceeds the expected momentum edge, sell unlocked only
                // and wait out the rest.
                const Volume locked_needed = size - std::min(size, view.unlocked_available);
                if (locked_needed > 0) {
                    const double haircut_frac =
                        view.haircut_rate * static_cast<double>(locked_needed) / static_cast<double>(size);
                    if (haircut_frac >= std::abs(ret)) size = std::min(size, view.unlocked_available);
                }
            }
            if (size < std::max<Volume>(1, view.min_quote_size)) return actions;
            const Price limit =
                std::max(view.price_step, view.best_bid->first - p.slip_ticks * view.price_step);
            actions.push_back(SubmitAction{Side::Sell, limit, size,
                                           clamp_validity(view.time, p.validity_ms, view.min_validto,
                                                          view.expiry_grid)});
        }
        return actions;
    }
};

class ValueAgent final : public Agent {
public:
    using Agent::Agent;

    std::vector<AgentAction> decide(const MarketView& view, Rng&) override {
        const auto& p = std::get<ValueParams>(spec_.params);
        std::vector<AgentAction> actions;
        if (!view.fundamental) return actions;
        if (last_action_ >= 0 && view.time - last_action_ < p.min_interval_ms) return actions;
        const double value = *view.fundamental;
        const Volume base = p.base_size > 0 ? p.base_size : view.nms;
        if (base < 1) return actions;

        // Committing a bigger quote is riskier, so demand a wider margin while
        // the session minimum size is elevated.
        const double size_multiple =
            static_cast<double>(view.min_quote_size) / static_cast<double>(view.nms);
        const double margin = p.size_risk_coeff * std::max(0.0, size_multiple - 1.0);

        BudgetTracker budget = budget_of(view);
        const Validity validity = clamp_validity(view.time, p.validity_ms, view.min_validto, view.expiry_grid);

        const Volume want = p.target - view.inventory;
        if (want > 0) {
            const Price bid = snap_down_price(value * (1.0 - p.theta) - margin, view.price_step);
            Volume vol = std::min(want, std::max(base, view.min_quote_size));
            vol = std::min(vol, budget.affordable(bid));
            if (vol >= view.min_quote_size && vol >= 1 && should_post(live_bid_px_, bid, p) &&
                budget.reserve_buy(bid, vol)) {
                actions.push_back(SubmitAction{Side::Buy, bid, vol, validity});
                pending_bid_px_ = bid;
                last_action_ = view.time;
            }
        } else if (want < 0) {
            const Price ask = snap_up_price(value * (1.0 + p.theta) + margin, view.price_step);
            Volume vol = std::min(-want, std::max(base, view.min_quote_size));
            vol = std::min(vol, budget.shares);
            if (vol >= view.min_quote_size && vol >= 1 && should_post(live_ask_px_, ask, p) &&
                budget.reserve_sell(vol)) {
                actions.push_back(SubmitAction{Side::Sell, ask, vol, validity});
                pending_ask_px_ = ask;
                last_action_ = view.time;
            }
        }
        return actions;
    }

    void on_quote_rested(QuoteId id, const SubmitAction& a) override {
        if (a.side == Side::Buy) {
            live_bid_ = id;
            live_bid_px_ = pending_bid_px_;
        } else {
            live_ask_ = id;
            live_ask_px_ = pending_ask_px_;
        }
    }
    void on_quote_removed(QuoteId id, RemovalReason) override {
        if (live_bid_ == id) {
            live_bid_.reset();
            live_bid_px_.reset();
        }
        if (live_ask_ == id) {
            live_ask_.reset();
            live_ask_px_.reset();
        }
    }

private:
    static bool should_post(const std::optional<Price>& live_px, Price want_px, const ValueParams& p) {
        return !live_px || std::llabs(*live_px - want_px) >= p.repost_delta_ticks;
    }

    std::optional<QuoteId> live_bid_, live_ask_;
    std::optional<Price> live_bid_px_, live_ask_px_;
    std::optional<Price> pending_bid_px_, pending_ask_px_;
    TimeMs last_action_ = -1;
};

class BlockAgent final : public Agent {
public:
    explicit BlockAgent(AgentSpec spec) : Agent(std::move(spec)) {
        const auto& p = std::get<BlockParams>(spec_.params);
        remainder_ = p.parent;
        next_time_ = p.start_ms;
    }

    std::vector<AgentAction> decide(const MarketView& view, Rng&) override {
        const auto& p = std::get<BlockParams>(spec_.params);
        std::vector<AgentAction> actions;
        if (remainder_ < 1 || view.time < next_time_) return actions;

        const auto& opposite = p.side == Side::Buy ? view.best_ask : view.best_bid;
        if (!opposite) {
            next_time_ = view.time + p.interval_ms;  // no reference price yet; retry later
            return actions;
        }
        Volume vol = std::min(p.child, remainder_);
        BudgetTracker budget = budget_of(view);
        Price limit;
        if (p.side == Side::Buy) {
            limit = opposite->first + p.slip_ticks * view.price_step;
            vol = std::min(vol, budget.affordable(limit));
        } else {
            limit = std::max(view.price_step, opposite->first - p.slip_ticks * view.price_step);
            vol = std::min(vol, budget.shares);
        }
        if (vol < std::max<Volume>(1, view.min_quote_size)) {
            next_time_ = view.time + p.interval_ms;
            return actions;
        }
        remainder_ -= vol;
        next_time_ += p.interval_ms;
        actions.push_back(SubmitAction{p.side, limit, vol,
                                       clamp_validity(view.time, p.validity_ms, view.min_validto,
                                                      view.expiry_grid)});
        return actions;
    }

    Volume remainder() const { return remainder_; }

private:
    Volume remainder_ = 0;
    TimeMs next_time_ = 0;
};

}  // namespace

std::unique_ptr<Agent> make_agent(AgentSpec spec) {
    switch (spec.kind) {
        case AgentKind::Zi: return std::make_unique<ZiAgent>(std::move(spec));
        case AgentKind::MarketMaker: return std::make_unique<MarketMakerAgent>(std::move(spec));
        case AgentKind::Momentum: return std::make_unique<MomentumAgent>(std::move(spec));
        case AgentKind::Value: return std::make_unique<ValueAgent>(std::move(spec));
        case AgentKind::Block: return std::make_unique<BlockAgent>(std::move(spec));
    }
    return nullptr;
}

}  // namespace mktsim
