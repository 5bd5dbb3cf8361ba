#include "mktsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mktsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

// Unknown fields are errors: a typo in an experiment config must not pass silently.
void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    require_object(j, path);
    for (const auto& [key, value] : j.items())
        if (allowed.count(key) == 0) fail(path + "." + key, "unknown field");
}

template <class T>
T get_num(const json& j, const std::string& path, const std::string& key, T def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<T>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) fail(path + "." + key, "expected a boolean");
    return j.at(key).get<bool>();
}

std::string get_str(const json& j, const std::string& path, const std::string& key, const std::string& def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

Side parse_side(const std::string& s, const std::string& path) {
    if (s == "buy") return Side::Buy;
    if (s == "sell") return Side::Sell;
    fail(path, "expected \"buy\" or \"sell\"");
}

AgentParams parse_params(AgentKind kind, const json& j, const std::string& path) {
    switch (kind) {
        case AgentKind::Zi: {
            check_keys(j, path, {"arrival_prob", "band_ticks", "volume", "validity_ms"});
            ZiParams p;
            p.arrival_prob = get_num(j, path, "arrival_prob", p.arrival_prob);
            p.band_ticks = get_num(j, path, "band_ticks", p.band_ticks);
            p.volume = get_num(j, path, "volume", p.volume);
            p.validity_ms = get_num(j, path, "validity_ms", p.validity_ms);
            if (p.arrival_prob < 0.0 || p.arrival_prob > 1.0) fail(path + ".arrival_prob", "must be in [0,1]");
            return p;
        }
        case AgentKind::MarketMaker: {
            check_keys(j, path, {"handling", "noncompetitive", "inventory_coeff", "adverse",
                                 "free_option_coeff", "size", "q_max", "target_inventory", "sigma",
                                 "validity_ms"});
            MarketMakerParams p;
            p.components.handling = get_num(j, path, "handling", p.components.handling);
            p.components.noncompetitive = get_num(j, path, "noncompetitive", p.components.noncompetitive);
            p.components.inventory_coeff = get_num(j, path, "inventory_coeff", p.components.inventory_coeff);
            p.components.adverse = get_num(j, path, "adverse", p.components.adverse);
            p.components.free_option_coeff = get_num(j, path, "free_option_coeff", p.components.free_option_coeff);
            p.size = get_num(j, path, "size", p.size);
            p.q_max = get_num(j, path, "q_max", p.q_max);
            p.target_inventory = get_num(j, path, "target_inventory", p.target_inventory);
            p.sigma = get_num(j, path, "sigma", p.sigma);
            p.validity_ms = get_num(j, path, "validity_ms", p.validity_ms);
            if (p.q_max <= 0) fail(path + ".q_max", "must be positive");
            return p;
        }
        case AgentKind::Momentum: {
            check_keys(j, path, {"window", "threshold", "size_scale", "max_size", "max_inventory",
                                 "slip_ticks", "validity_ms", "haircut_aware"});
            MomentumParams p;
            p.window = get_num(j, path, "window", p.window);
            p.threshold = get_num(j, path, "threshold", p.threshold);
            p.size_scale = get_num(j, path, "size_scale", p.size_scale);
            p.max_size = get_num(j, path, "max_size", p.max_size);
            p.max_inventory = get_num(j, path, "max_inventory", p.max_inventory);
            p.slip_ticks = get_num(j, path, "slip_ticks", p.slip_ticks);
            p.validity_ms = get_num(j, path, "validity_ms", p.validity_ms);
            p.haircut_aware = get_bool(j, path, "haircut_aware", p.haircut_aware);
            if (p.window < 1) fail(path + ".window", "must be >= 1");
            return p;
        }
        case AgentKind::Value: {
            check_keys(j, path, {"theta", "target", "base_size", "size_risk_coeff",
                                 "repost_delta_ticks", "validity_ms", "min_interval_ms"});
            ValueParams p;
            p.theta = get_num(j, path, "theta", p.theta);
            p.target = get_num(j, path, "target", p.target);
            p.base_size = get_num(j, path, "base_size", p.base_size);
            p.size_risk_coeff = get_num(j, path, "size_risk_coeff", p.size_risk_coeff);
            p.repost_delta_ticks = get_num(j, path, "repost_delta_ticks", p.repost_delta_ticks);
            p.validity_ms = get_num(j, path, "validity_ms", p.validity_ms);
            p.min_interval_ms = get_num(j, path, "min_interval_ms", p.min_interval_ms);
            if (p.theta < 0.0) fail(path + ".theta", "must be >= 0");
            if (p.min_interval_ms < 0) fail(path + ".min_interval_ms", "must be >= 0");
            return p;
        }
        case AgentKind::Block: {
            check_keys(j, path, {"side", "parent", "child", "interval_ms", "start_ms", "slip_ticks",
                                 "validity_ms"});
            BlockParams p;
            p.side = parse_side(get_str(j, path, "side", "buy"), path + ".side");
            p.parent = get_num(j, path, "parent", p.parent);
            p.child = get_num(j, path, "child", p.child);
            p.interval_ms = get_num(j, path, "interval_ms", p.interval_ms);
            p.start_ms = get_num(j, path, "start_ms", p.start_ms);
            p.slip_ticks = get_num(j, path, "slip_ticks", p.slip_ticks);
            p.validity_ms = get_num(j, path, "validity_ms", p.validity_ms);
            if (p.child < 1) fail(path + ".child", "must be >= 1");
            if (p.interval_ms < 1) fail(path + ".interval_ms", "must be >= 1");
            return p;
        }
    }
    fail(path, "unreachable");
}

AgentKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "zi") return AgentKind::Zi;
    if (s == "market_maker") return AgentKind::MarketMaker;
    if (s == "momentum") return AgentKind::Momentum;
    if (s == "value") return AgentKind::Value;
    if (s == "block") return AgentKind::Block;
    fail(path, "unknown agent kind \"" + s + "\"");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    check_keys(j, "config",
               {"schema_version", "seed", "horizon_days", "day_length_ms", "agent_tick_ms",
                "snapshot_interval_ms", "asset", "regime", "lock", "book", "session", "metrics",
                "agents", "halts"});

    ScenarioConfig cfg;
    cfg.schema_version = get_num(j, "config", "schema_version", 0);
    if (cfg.schema_version != 1) fail("config.schema_version", "must be 1");
    cfg.seed = get_num<std::uint64_t>(j, "config", "seed", cfg.seed);
    cfg.horizon_days = get_num(j, "config", "horizon_days", cfg.horizon_days);
    cfg.day_length_ms = get_num(j, "config", "day_length_ms", cfg.day_length_ms);
    cfg.agent_tick_ms = get_num(j, "config", "agent_tick_ms", cfg.agent_tick_ms);
    cfg.snapshot_interval_ms = get_num(j, "config", "snapshot_interval_ms", cfg.snapshot_interval_ms);
    if (cfg.horizon_days < 1) fail("config.horizon_days", "must be >= 1");
    if (cfg.day_length_ms < 1) fail("config.day_length_ms", "must be >= 1");
    if (cfg.agent_tick_ms < 1) fail("config.agent_tick_ms", "must be >= 1");
    if (cfg.snapshot_interval_ms < 1) fail("config.snapshot_interval_ms", "must be >= 1");

    if (j.contains("asset")) {
        // Single-asset engine; the key stays an object (not a list) until
        // multi-issuer runs exist.
        const json& a = j.at("asset");
        check_keys(a, "asset", {"issuer", "tick_value", "nms", "initial_price", "fundamental"});
        cfg.asset.issuer = get_str(a, "asset", "issuer", cfg.asset.issuer);
        cfg.asset.tick_value = get_num(a, "asset", "tick_value", cfg.asset.tick_value);
        cfg.asset.nms = get_num(a, "asset", "nms", cfg.asset.nms);
        cfg.asset.initial_price = get_num(a, "asset", "initial_price", cfg.asset.initial_price);
        if (cfg.asset.tick_value < 1) fail("asset.tick_value", "must be >= 1");
        if (cfg.asset.nms < 1) fail("asset.nms", "must be >= 1");
        if (cfg.asset.initial_price < 1) fail("asset.initial_price", "must be >= 1");
        if (a.contains("fundamental")) {
            const json& f = a.at("fundamental");
            check_keys(f, "asset.fundamental", {"initial", "jump_intensity_per_day", "jump_sigma"});
            cfg.asset.fundamental.initial = get_num(f, "asset.fundamental", "initial", cfg.asset.fundamental.initial);
            cfg.asset.fundamental.jump_intensity_per_day =
                get_num(f, "asset.fundamental", "jump_intensity_per_day", 0.0);
            cfg.asset.fundamental.jump_sigma = get_num(f, "asset.fundamental", "jump_sigma", 0.0);
        }
    }

    const std::string regime = get_str(j, "config", "regime", "price_time");
    if (regime == "price_time")
        cfg.regime = PriorityRegime::PriceTime;
    else if (regime == "price_validto_volume")
        cfg.regime = PriorityRegime::PriceValidToVolume;
    else
        fail("config.regime", "expected \"price_time\" or \"price_validto_volume\"");

    if (j.contains("lock")) {
        const json& l = j.at("lock");
        check_keys(l, "lock", {"enabled", "haircut_rate", "daily_unlock_rate", "trading_days_per_year", "cap_days"});
        cfg.lock.enabled = get_bool(l, "lock", "enabled", cfg.lock.enabled);
        cfg.lock.haircut_rate = get_num(l, "lock", "haircut_rate", cfg.lock.haircut_rate);
        cfg.lock.daily_unlock_rate = get_num(l, "lock", "daily_unlock_rate", cfg.lock.daily_unlock_rate);
        cfg.lock.trading_days_per_year = get_num(l, "lock", "trading_days_per_year", cfg.lock.trading_days_per_year);
        cfg.lock.cap_days = get_num(l, "lock", "cap_days", 3 * cfg.lock.trading_days_per_year);
        if (cfg.lock.haircut_rate < 0.0 || cfg.lock.haircut_rate > 1.0) fail("lock.haircut_rate", "must be in [0,1]");
        if (cfg.lock.daily_unlock_rate <= 0.0 || cfg.lock.daily_unlock_rate >= 1.0)
            fail("lock.daily_unlock_rate", "must be in (0,1)");
        if (cfg.lock.cap_days < 1) fail("lock.cap_days", "must be >= 1");
    } else {
        cfg.lock.cap_days = 3 * cfg.lock.trading_days_per_year;
    }

    if (j.contains("book")) {
        const json& b = j.at("book");
        check_keys(b, "book", {"price_step_ticks", "expiry_grid_ms", "min_validto_floor_ms"});
        cfg.book.price_step = get_num(b, "book", "price_step_ticks", cfg.book.price_step);
        cfg.book.expiry_grid_ms = get_num(b, "book", "expiry_grid_ms", cfg.book.expiry_grid_ms);
        cfg.book.min_validto_ms = get_num(b, "book", "min_validto_floor_ms", cfg.book.min_validto_ms);
        if (cfg.book.price_step < 1) fail("book.price_step_ticks", "must be >= 1");
        if (cfg.book.expiry_grid_ms < 1) fail("book.expiry_grid_ms", "must be >= 1");
    }

    if (j.contains("session")) {
        const json& s = j.at("session");
        check_keys(s, "session",
                   {"open_ms", "close_ms", "ramp_duration_ms", "ramp_mode", "size_multiple_start",
                    "min_validto_start_ms", "min_validto_floor_ms", "decay"});
        cfg.session.open_ms = get_num(s, "session", "open_ms", cfg.session.open_ms);
        cfg.session.close_ms = get_num(s, "session", "close_ms", cfg.session.close_ms);
        cfg.session.ramp_duration_ms = get_num(s, "session", "ramp_duration_ms", cfg.session.ramp_duration_ms);
        const std::string mode = get_str(s, "session", "ramp_mode", "none");
        if (mode == "none")
            cfg.session.ramp_mode = RampMode::None;
        else if (mode == "size")
            cfg.session.ramp_mode = RampMode::Size;
        else if (mode == "validto")
            cfg.session.ramp_mode = RampMode::ValidTo;
        else
            fail("session.ramp_mode", "expected \"none\", \"size\" or \"validto\"");
        cfg.session.size_multiple_start = get_num(s, "session", "size_multiple_start", cfg.session.size_multiple_start);
        cfg.session.min_validto_start_ms = get_num(s, "session", "min_validto_start_ms", cfg.session.min_validto_start_ms);
        cfg.session.min_validto_floor_ms = get_num(s, "session", "min_validto_floor_ms", cfg.session.min_validto_floor_ms);
        const std::string decay = get_str(s, "session", "decay", "linear");
        if (decay == "linear")
            cfg.session.decay = RampDecay::Linear;
        else if (decay == "exponential")
            cfg.session.decay = RampDecay::Exponential;
        else
            fail("session.decay", "expected \"linear\" or \"exponential\"");
    }
    if (cfg.session.open_ms < 0 || cfg.session.close_ms > cfg.day_length_ms)
        fail("session", "open/close must lie within the trading day");
    if (cfg.session.open_ms >= cfg.session.close_ms) fail("session", "open_ms must precede close_ms");
    if (cfg.session.ramp_mode != RampMode::None &&
        cfg.session.ramp_duration_ms > cfg.session.close_ms - cfg.session.open_ms)
        fail("session.ramp_duration_ms", "exceeds the session length");
    if (cfg.session.ramp_mode == RampMode::Size && cfg.session.size_multiple_start < 1.0)
        fail("session.size_multiple_start", "must be >= 1");
    if (cfg.session.ramp_mode == RampMode::ValidTo &&
        cfg.session.min_validto_start_ms < cfg.session.min_validto_floor_ms)
        fail("session.min_validto_start_ms", "must be >= the floor");

    if (j.contains("metrics")) {
        const json& m = j.at("metrics");
        check_keys(m, "metrics", {"window_ms", "band_fraction", "autocorr_lag"});
        cfg.metrics.window_ms = get_num(m, "metrics", "window_ms", cfg.metrics.window_ms);
        cfg.metrics.band_fraction = get_num(m, "metrics", "band_fraction", cfg.metrics.band_fraction);
        cfg.metrics.autocorr_lag = get_num(m, "metrics", "autocorr_lag", cfg.metrics.autocorr_lag);
        if (cfg.metrics.window_ms < 1) fail("metrics.window_ms", "must be >= 1");
        if (cfg.metrics.band_fraction < 0.0) fail("metrics.band_fraction", "must be >= 0");
        if (cfg.metrics.autocorr_lag < 1) fail("metrics.autocorr_lag", "must be >= 1");
    }
    cfg.metrics.tick_value = cfg.asset.tick_value;

    if (j.contains("agents")) {
        const json& groups = j.at("agents");
        if (!groups.is_array()) fail("agents", "expected an array");
        int gi = 0;
        for (const auto& g : groups) {
            const std::string path = "agents[" + std::to_string(gi) + "]";
            check_keys(g, path, {"kind", "count", "cash", "shares", "params"});
            AgentGroupConfig group;
            group.kind = parse_kind(get_str(g, path, "kind", ""), path + ".kind");
            group.count = get_num(g, path, "count", 1);
            group.cash = get_num(g, path, "cash", Money{0});
            group.shares = get_num(g, path, "shares", Volume{0});
            if (group.count < 1) fail(path + ".count", "must be >= 1");
            if (group.cash < 0) fail(path + ".cash", "must be >= 0");
            if (group.shares < 0) fail(path + ".shares", "must be >= 0");
            group.params = parse_params(group.kind, g.contains("params") ? g.at("params") : json::object(),
                                        path + ".params");
            cfg.agent_groups.push_back(group);
            ++gi;
        }
    }

    if (j.contains("halts")) {
        const json& halts = j.at("halts");
        if (!halts.is_array()) fail("halts", "expected an array");
        int hi = 0;
        for (const auto& h : halts) {
            const std::string path = "halts[" + std::to_string(hi) + "]";
            check_keys(h, path, {"day", "halt_ms", "resume_ms"});
            HaltConfig halt;
            halt.day = get_num(h, path, "day", Day{0});
            halt.halt_ms = get_num(h, path, "halt_ms", TimeMs{0});
            halt.resume_ms = get_num(h, path, "resume_ms", TimeMs{0});
            if (halt.resume_ms <= halt.halt_ms) fail(path, "resume_ms must follow halt_ms");
            cfg.halts.push_back(halt);
            ++hi;
        }
    }

    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

namespace {

void deep_merge(json& base, const json& over) {
    for (const auto& [key, value] : over.items()) {
        if (value.is_object() && base.contains(key) && base.at(key).is_object())
            deep_merge(base.at(key), value);
        else
            base[key] = value;
    }
}

}  // namespace

std::string merge_override(const std::string& base_json, const std::string& override_json) {
    json base, over;
    try {
        base = json::parse(base_json);
        over = json::parse(override_json);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("override: ") + e.what());
    }
    require_object(over, "override");
    static const std::set<std::string> allowed = {"regime", "lock", "session", "seed"};
    for (const auto& [key, value] : over.items())
        if (allowed.count(key) == 0)
            throw ConfigError("override." + key + ": only regime/lock/session/seed may be overridden");
    deep_merge(base, over);
    return base.dump();
}

std::vector<AgentSpec> expand_agents(const ScenarioConfig& cfg) {
    std::vector<AgentSpec> specs;
    AgentId next = 1;
    for (const auto& g : cfg.agent_groups) {
        for (int i = 0; i < g.count; ++i) {
            AgentSpec s;
            s.id = next++;
            s.kind = g.kind;
            s.params = g.params;
            s.cash = g.cash;
            s.shares = g.shares;
            specs.push_back(std::move(s));
        }
    }
    return specs;
}

SessionSchedule session_schedule_for_day(const ScenarioConfig& cfg, Day day) {
    const TimeMs base = day * cfg.day_length_ms;
    SessionSchedule s;
    s.open_time = base + cfg.session.open_ms;
    s.close_time = base + cfg.session.close_ms;
    s.ramp_duration = cfg.session.ramp_duration_ms;
    s.ramp_mode = cfg.session.ramp_mode;
    s.nms = cfg.asset.nms;
    s.size_multiple_start = cfg.session.size_multiple_start;
    s.min_validto_start = cfg.session.min_validto_start_ms;
    s.min_validto_floor = cfg.session.min_validto_floor_ms;
    s.decay = cfg.session.decay;
    return s;
}

}  // namespace mktsim
