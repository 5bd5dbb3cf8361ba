#pragma once

#include <string>
#include <vector>

#include "mktsim/analysis.hpp"
#include "mktsim/scenario.hpp"

namespace mktsim {

struct SeedPair {
    std::uint64_t seed = 0;
    RunSummary base;
    RunSummary alt;
};

struct CompareOutcome {
    std::vector<SeedPair> pairs;
    // seeds where alt - base is strictly positive, per metric
    int volume_up = 0;
    int resting_up = 0;
    int depth_up = 0;
    int momentum_profit_up = 0;
    int momentum_holding_up = 0;
};

// Matched-pair regime comparison: the base scenario and the override applied
// on top of it, run with identical seeds. The override may touch only
// regime/lock/session (and seed, which the per-pair seed replaces anyway).
CompareOutcome compare_regimes(const std::string& base_config_text, const std::string& override_text,
                               const std::vector<std::uint64_t>& seeds);

std::string compare_report_csv(const CompareOutcome& outcome);

}  // namespace mktsim
