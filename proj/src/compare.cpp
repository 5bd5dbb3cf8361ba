#include "mktsim/compare.hpp"

#include <sstream>

#include <json.hpp>

#include "mktsim/sim.hpp"

namespace mktsim {

namespace {

std::string with_seed(const std::string& config_text, std::uint64_t seed) {
    auto j = nlohmann::json::parse(config_text);
    j["seed"] = seed;
    return j.dump();
}

}  // namespace

CompareOutcome compare_regimes(const std::string& base_config_text, const std::string& override_text,
                               const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw ConfigError("compare: seed list must not be empty");
    const std::string alt_config_text = merge_override(base_config_text, override_text);

    CompareOutcome outcome;
    for (std::uint64_t seed : seeds) {
        const ScenarioConfig base_cfg = parse_scenario(with_seed(base_config_text, seed));
        const ScenarioConfig alt_cfg = parse_scenario(with_seed(alt_config_text, seed));
        const RunResult base_run = run_scenario(base_cfg);
        const RunResult alt_run = run_scenario(alt_cfg);

        SeedPair pair;
        pair.seed = seed;
        pair.base = summarize_run(base_run, base_cfg);
        pair.alt = summarize_run(alt_run, alt_cfg);
        outcome.pairs.push_back(pair);

        if (pair.alt.total_volume > pair.base.total_volume) ++outcome.volume_up;
        if (pair.alt.mean_resting_ms && pair.base.mean_resting_ms &&
            *pair.alt.mean_resting_ms > *pair.base.mean_resting_ms)
            ++outcome.resting_up;
        if (pair.alt.mean_depth_band && pair.base.mean_depth_band &&
            *pair.alt.mean_depth_band > *pair.base.mean_depth_band)
            ++outcome.depth_up;
        if (pair.alt.momentum_profit > pair.base.momentum_profit) ++outcome.momentum_profit_up;
        if (pair.alt.momentum_holding_ms > pair.base.momentum_holding_ms) ++outcome.momentum_holding_up;
    }
    return outcome;
}

std::string compare_report_csv(const CompareOutcome& outcome) {
    std::ostringstream out;
    out << "# schema: mktsim.compare.v1\n";
    out << "seed,base_trades,alt_trades,base_volume,alt_volume,base_resting_ms,alt_resting_ms,"
           "base_depth,alt_depth,base_momentum_profit,alt_momentum_profit,"
           "base_momentum_holding_ms,alt_momentum_holding_ms,base_haircut,alt_haircut\n";
    const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& p : outcome.pairs) {
        out << p.seed << ',' << p.base.trade_count << ',' << p.alt.trade_count << ','
            << p.base.total_volume << ',' << p.alt.total_volume << ',' << opt(p.base.mean_resting_ms)
            << ',' << opt(p.alt.mean_resting_ms) << ',' << opt(p.base.mean_depth_band) << ','
            << opt(p.alt.mean_depth_band) << ',' << p.base.momentum_profit << ','
            << p.alt.momentum_profit << ',' << format_double(p.base.momentum_holding_ms) << ','
            << format_double(p.alt.momentum_holding_ms) << ',' << p.base.total_haircut << ','
            << p.alt.total_haircut << "\n";
    }
    out << "# sign counts (alt>base): volume=" << outcome.volume_up << " resting=" << outcome.resting_up
        << " depth=" << outcome.depth_up << " momentum_profit=" << outcome.momentum_profit_up
        << " momentum_holding=" << outcome.momentum_holding_up << "\n";
    return out.str();
}

}  // namespace mktsim
