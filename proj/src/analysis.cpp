#include "mktsim/analysis.hpp"

#include <deque>

#include "mktsim/metrics.hpp"

namespace mktsim {

RoundTripStats round_trip_stats(const std::vector<Trade>& tape, AgentId agent, Money tick_value,
                                TimeMs horizon_end) {
    struct Lot {
        TimeMs time;
        Price price;
        Volume volume;
    };
    std::deque<Lot> open;
    RoundTripStats stats;
    double holding_weighted = 0.0;
    Volume holding_volume = 0;

    for (const auto& t : tape) {
        if (t.buyer == agent) {
            open.push_back({t.time, t.price, t.volume});
            stats.bought += t.volume;
        }
        if (t.seller == agent) {
            Volume remaining = t.volume;
            while (remaining > 0 && !open.empty()) {
                Lot& lot = open.front();
                const Volume matched = std::min(remaining, lot.volume);
                stats.realized_profit += (t.price - lot.price) * tick_value * matched;
                holding_weighted += static_cast<double>(t.time - lot.time) * static_cast<double>(matched);
                holding_volume += matched;
                stats.sold_matched += matched;
                lot.volume -= matched;
                remaining -= matched;
                if (lot.volume == 0) open.pop_front();
            }
            // Endowment sales (no matching buy) carry no round-trip P&L, but
            // the haircut on the sale is still a realized cost.
            stats.realized_profit -= t.haircut;
            stats.haircuts_paid += t.haircut;
        }
    }

    for (const auto& lot : open) {
        holding_weighted += static_cast<double>(horizon_end - lot.time) * static_cast<double>(lot.volume);
        holding_volume += lot.volume;
    }
    if (holding_volume > 0) stats.mean_holding_ms = holding_weighted / static_cast<double>(holding_volume);
    return stats;
}

RunSummary summarize_run(const RunResult& result, const ScenarioConfig& cfg) {
    RunSummary s;
    s.trade_count = static_cast<std::int64_t>(result.tape.size());
    for (const auto& t : result.tape) s.total_volume += t.volume;
    s.total_haircut = result.total_haircut;

    double spread_sum = 0, depth_sum = 0;
    std::int64_t spread_n = 0, depth_n = 0;
    for (const auto& row : result.metrics) {
        if (row.quoted_spread) {
            spread_sum += *row.quoted_spread;
            ++spread_n;
        }
        if (row.depth_band) {
            depth_sum += *row.depth_band;
            ++depth_n;
        }
    }
    if (spread_n > 0) s.mean_quoted_spread = spread_sum / static_cast<double>(spread_n);
    if (depth_n > 0) s.mean_depth_band = depth_sum / static_cast<double>(depth_n);

    std::vector<QuoteLifecycle> lifecycle;
    lifecycle.reserve(result.quote_log.size());
    for (const auto& q : result.quote_log)
        lifecycle.push_back({q.id, q.submit_time, q.removal_time, q.reason});
    s.mean_resting_ms = mean_resting_time(lifecycle);

    const TimeMs horizon_end = cfg.horizon_days * cfg.day_length_ms;
    double holding_weighted = 0.0;
    double holding_volume = 0.0;
    for (const auto& a : result.agents) {
        if (a.kind != AgentKind::Momentum) continue;
        const auto stats = round_trip_stats(result.tape, a.id, cfg.asset.tick_value, horizon_end);
        s.momentum_profit += stats.realized_profit;
        const Volume vol = stats.sold_matched + (stats.bought - stats.sold_matched);
        holding_weighted += stats.mean_holding_ms * static_cast<double>(vol);
        holding_volume += static_cast<double>(vol);
    }
    if (holding_volume > 0) s.momentum_holding_ms = holding_weighted / holding_volume;
    return s;
}

}  // namespace mktsim
