#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mktsim/agents.hpp"
#include "mktsim/book.hpp"
#include "mktsim/metrics.hpp"
#include "mktsim/registry.hpp"
#include "mktsim/session.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

// Raised on any malformed, out-of-range or unknown configuration field; the
// message carries the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FundamentalConfig {
    double initial = 10000.0;
    double jump_intensity_per_day = 0.0;  // Poisson; news plays a minor role by default
    double jump_sigma = 0.0;              // lognormal jump size
};

struct AssetConfig {
    IssuerId issuer = "ASSET";
    Money tick_value = 1;
    Volume nms = 100;
    Price initial_price = 10000;
    FundamentalConfig fundamental;
};

struct SessionConfig {
    TimeMs open_ms = 0;  // within the trading day
    TimeMs close_ms = 30600000;
    TimeMs ramp_duration_ms = 1800000;
    RampMode ramp_mode = RampMode::None;
    double size_multiple_start = 50.0;
    TimeMs min_validto_start_ms = 300000;
    TimeMs min_validto_floor_ms = 5000;
    RampDecay decay = RampDecay::Linear;
};

struct AgentGroupConfig {
    AgentKind kind = AgentKind::Zi;
    int count = 1;
    Money cash = 0;
    Volume shares = 0;
    AgentParams params;
};

struct HaltConfig {
    Day day = 0;
    TimeMs halt_ms = 0;    // within the trading day
    TimeMs resume_ms = 0;
};

struct ScenarioConfig {
    int schema_version = 1;
    std::uint64_t seed = 1;
    int horizon_days = 1;
    TimeMs day_length_ms = 30600000;  // 8.5 simulated hours
    TimeMs agent_tick_ms = 100;
    TimeMs snapshot_interval_ms = 1000;
    AssetConfig asset;
    PriorityRegime regime = PriorityRegime::PriceTime;
    LockPolicy lock;
    BookConfig book;
    SessionConfig session;
    MetricsConfig metrics;
    std::vector<AgentGroupConfig> agent_groups;
    std::vector<HaltConfig> halts;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

// Applies a partial override (deep merge) onto the base config text. Only the
// top-level keys "regime", "lock", "session" and "seed" may be touched.
std::string merge_override(const std::string& base_json, const std::string& override_json);

// Flat AgentSpec list (ids assigned 1..N in declaration order).
std::vector<AgentSpec> expand_agents(const ScenarioConfig& cfg);

SessionSchedule session_schedule_for_day(const ScenarioConfig& cfg, Day day);

}  // namespace mktsim
