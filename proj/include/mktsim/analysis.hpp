#pragma once

#include <optional>
#include <vector>

#include "mktsim/sim.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

// Realized round-trip accounting for one agent over a tape, FIFO-matching
// sells against earlier buys. Haircuts are charged to the sale they occurred
// on. Holding periods are volume-weighted; shares still held at the horizon
// are censored there, so "never managed to exit" reads as a long holding.
struct RoundTripStats {
    Money realized_profit = 0;     // matched sells minus matched buys, net of haircuts
    Money haircuts_paid = 0;
    Volume bought = 0;
    Volume sold_matched = 0;
    double mean_holding_ms = 0.0;  // over matched volume plus censored open volume
};

RoundTripStats round_trip_stats(const std::vector<Trade>& tape, AgentId agent, Money tick_value,
                                TimeMs horizon_end);

// Headline numbers of one run, used by regime comparisons.
struct RunSummary {
    std::int64_t trade_count = 0;
    Volume total_volume = 0;
    Money total_haircut = 0;
    std::optional<double> mean_quoted_spread;
    std::optional<double> mean_depth_band;
    std::optional<double> mean_resting_ms;
    Money momentum_profit = 0;
    double momentum_holding_ms = 0.0;
};

RunSummary summarize_run(const RunResult& result, const ScenarioConfig& cfg);

}  // namespace mktsim
