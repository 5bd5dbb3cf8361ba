#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mktsim/analysis.hpp"
#include "mktsim/compare.hpp"
#include "mktsim/sim.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mktsim::IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    // "1,2,5" or "1..20"
    std::vector<std::uint64_t> seeds;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(spec.substr(0, dots));
        const std::uint64_t hi = std::stoull(spec.substr(dots + 2));
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) seeds.push_back(std::stoull(item));
    return seeds;
}

int cmd_run(const std::string& config_path, std::int64_t seed_override, const std::string& out_dir) {
    const std::string text = slurp(config_path);
    mktsim::ScenarioConfig cfg = mktsim::parse_scenario(text);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    const mktsim::RunResult result = mktsim::run_scenario(cfg);
    mktsim::write_run_output(result, cfg, std::filesystem::path(config_path).filename().string(), text,
                             out_dir);
    const auto summary = mktsim::summarize_run(result, cfg);
    std::cout << "run complete: trades=" << summary.trade_count << " volume=" << summary.total_volume
              << " haircut=" << summary.total_haircut << " outputs=" << out_dir << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    mktsim::parse_scenario(slurp(config_path));
    std::cout << "config ok: " << config_path << "\n";
    return 0;
}

int cmd_compare(const std::string& base_path, const std::string& override_path, const std::string& seeds_spec,
                const std::string& out_path) {
    const auto seeds = parse_seeds(seeds_spec);
    const auto outcome = mktsim::compare_regimes(slurp(base_path), slurp(override_path), seeds);
    const std::string report = mktsim::compare_report_csv(outcome);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw mktsim::IoError("cannot open: " + out_path);
        out << report;
    }
    std::cout << report;
    return 0;
}

int cmd_metrics(const std::string& tape_path, const std::string& snapshots_path, const std::string& quotes_path,
                const std::string& out_dir, mktsim::TimeMs window_ms, double band, int lag,
                mktsim::Money tick_value) {
    const auto tape = mktsim::read_trades_csv(tape_path);
    const auto snapshots = mktsim::read_snapshots_csv(snapshots_path);
    mktsim::MetricsConfig cfg{window_ms, band, lag, tick_value};
    auto series = mktsim::compute_metrics(tape, snapshots, cfg);
    if (!quotes_path.empty()) {
        const auto quotes = mktsim::read_quotes_csv(quotes_path);
        std::vector<mktsim::QuoteLifecycle> lifecycle;
        lifecycle.reserve(quotes.size());
        for (const auto& q : quotes) lifecycle.push_back({q.id, q.submit_time, q.removal_time, q.reason});
        mktsim::fill_resting_times(series, lifecycle);
    }
    std::filesystem::create_directories(out_dir);
    mktsim::write_metrics_csv((std::filesystem::path(out_dir) / "metrics.csv").string(), series);
    mktsim::write_metrics_jsonl((std::filesystem::path(out_dir) / "metrics.jsonl").string(), series);
    std::cout << "metrics recomputed: windows=" << series.size() << " outputs=" << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mktsim: discrete-event equity market simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::int64_t seed_override = -1;
    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("config", config_path, "scenario config (JSON)")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--out", out_dir, "output directory");

    std::string v_config;
    auto* validate = app.add_subcommand("validate", "validate a scenario config");
    validate->add_option("config", v_config, "scenario config (JSON)")->required();

    std::string base_path, override_path, seeds_spec = "1..20", compare_out;
    auto* compare = app.add_subcommand("compare", "matched-pair regime comparison");
    compare->add_option("base", base_path, "base scenario config")->required();
    compare->add_option("override", override_path, "override file (regime/lock/session)")->required();
    compare->add_option("--seeds", seeds_spec, "seed list: \"1,2,3\" or \"1..20\"");
    compare->add_option("--out", compare_out, "also write the report CSV here");

    std::string tape_path, snapshots_path, quotes_path, metrics_out = "out";
    std::int64_t window_ms = 60000;
    double band = 0.01;
    int lag = 1;
    std::int64_t tick_value = 1;
    auto* metrics = app.add_subcommand("metrics", "recompute metrics from stored outputs");
    metrics->add_option("--tape", tape_path, "trades.csv")->required();
    metrics->add_option("--snapshots", snapshots_path, "snapshots.csv")->required();
    metrics->add_option("--quotes", quotes_path, "quotes.csv (optional, for resting times)");
    metrics->add_option("--out", metrics_out, "output directory");
    metrics->add_option("--window-ms", window_ms, "metrics window");
    metrics->add_option("--band", band, "depth band fraction");
    metrics->add_option("--lag", lag, "autocorrelation lag");
    metrics->add_option("--tick-value", tick_value, "currency units per tick");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, seed_override, out_dir);
        if (validate->parsed()) return cmd_validate(v_config);
        if (compare->parsed()) return cmd_compare(base_path, override_path, seeds_spec, compare_out);
        if (metrics->parsed())
            return cmd_metrics(tape_path, snapshots_path, quotes_path, metrics_out, window_ms, band, lag,
                               tick_value);
    } catch (const mktsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
