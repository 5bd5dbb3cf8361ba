#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mktsim/io.hpp"
#include "mktsim/metrics.hpp"
#include "mktsim/registry.hpp"
#include "mktsim/scenario.hpp"

namespace mktsim {

inline constexpr const char* kCodeVersion = "mktsim 0.1.0";

class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AgentEndState {
    AgentId id = 0;
    AgentKind kind = AgentKind::Zi;
    Money cash = 0;
    Volume locked = 0;
    Volume unlocked = 0;
};

struct RunResult {
    std::vector<Trade> tape;
    std::vector<BookSnapshot> snapshots;
    std::vector<QuoteLogRecord> quote_log;
    std::vector<LedgerRow> ledger_rows;      // end of each day
    std::vector<SimEvent> events;
    std::vector<UnlockRecord> unlock_log;
    MetricsSeries metrics;
    std::vector<AgentEndState> agents;
    Money total_haircut = 0;
    Money issuer_treasury = 0;
    std::int64_t rejected_submissions = 0;
    std::int64_t budget_rejections = 0;  // harness backstop; agents should self-limit to zero
};

// Executes one scenario deterministically: integer time, integer prices and
// cash, named RNG substreams. Equal (config, seed) gives byte-identical
// output files.
RunResult run_scenario(const ScenarioConfig& cfg);

// Writes all output files into out_dir (created if needed). config_text is
// hashed into the manifest.
void write_run_output(const RunResult& result, const ScenarioConfig& cfg, const std::string& config_name,
                      const std::string& config_text, const std::string& out_dir);

}  // namespace mktsim
