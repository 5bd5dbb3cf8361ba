#include "mktsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "mktsim/book.hpp"
#include "mktsim/session.hpp"

namespace mktsim {

namespace {

struct Account {
    Money cash = 0;
    Money reserved_cash = 0;
    Volume reserved_shares = 0;
};

struct FundamentalJump {
    TimeMs time = 0;
    double factor = 1.0;
};

// Per-day jump schedule drawn from the fundamental substream.
std::vector<FundamentalJump> draw_jumps(const ScenarioConfig& cfg, Day day, Rng& rng) {
    std::vector<FundamentalJump> jumps;
    const auto& f = cfg.asset.fundamental;
    if (f.jump_intensity_per_day <= 0.0) return jumps;
    const std::int64_t n = rng.poisson(f.jump_intensity_per_day);
    const TimeMs base = day * cfg.day_length_ms;
    for (std::int64_t i = 0; i < n; ++i) {
        const TimeMs at = base + static_cast<TimeMs>(rng.below(static_cast<std::uint64_t>(cfg.day_length_ms)));
        jumps.push_back({at, std::exp(f.jump_sigma * rng.normal())});
    }
    std::sort(jumps.begin(), jumps.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
    return jumps;
}

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg)
        : cfg_(cfg),
          book_(cfg.book),
          registry_(cfg.lock, cfg.asset.tick_value),
          fundamental_rng_(derive_stream(cfg.seed, "fundamental")),
          registry_rng_(derive_stream(cfg.seed, "registry")) {
        specs_ = expand_agents(cfg_);
        for (auto& s : specs_) {
            agents_.push_back(make_agent(s));
            accounts_[s.id].cash = s.cash;
            registry_.grant(s.id, cfg_.asset.issuer, s.shares);
            decide_rngs_.push_back(derive_stream(cfg_.seed, "agent", static_cast<std::uint64_t>(s.id)));
            order_rngs_.push_back(derive_stream(cfg_.seed, "order", static_cast<std::uint64_t>(s.id)));
        }
        fundamental_ = cfg_.asset.fundamental.initial;
        last_trade_price_ = cfg_.asset.initial_price;
    }

    RunResult run() {
        for (Day day = 0; day < cfg_.horizon_days; ++day) run_day(day);
        finish();
        return std::move(result_);
    }

private:
    void event(TimeMs t, std::string kind, std::string detail) {
        result_.events.push_back({t, std::move(kind), std::move(detail)});
    }

    void run_day(Day day) {
        Session session(session_schedule_for_day(cfg_, day));
        const TimeMs day_base = day * cfg_.day_length_ms;
        const TimeMs open_abs = session.schedule().open_time;
        event(day_base, "day_open", "day=" + std::to_string(day));

        std::vector<FundamentalJump> jumps = draw_jumps(cfg_, day, fundamental_rng_);
        std::size_t jump_i = 0;

        std::vector<HaltConfig> halts;
        for (const auto& h : cfg_.halts)
            if (h.day == day) halts.push_back(h);
        std::sort(halts.begin(), halts.end(),
                  [](const HaltConfig& a, const HaltConfig& b) { return a.halt_ms < b.halt_ms; });
        std::size_t halt_i = 0;
        TimeMs resume_at = -1;

        SessionPhase prev_phase = SessionPhase::PreOpen;

        for (TimeMs t = open_abs; t < day_base + cfg_.day_length_ms; t += cfg_.agent_tick_ms) {
            if (!session.halted() && halt_i < halts.size() && t >= day_base + halts[halt_i].halt_ms) {
                session.halt(t);
                clear_book(t);
                resume_at = day_base + halts[halt_i].resume_ms;
                ++halt_i;
                event(t, "halt", "");
            }
            if (session.halted()) {
                if (resume_at >= 0 && t >= resume_at) {
                    auto restarted = session.restart(t);
                    if (restarted.ok())
                        event(t, "restart", "ramp_until=" + std::to_string(t + restarted.value().ramp_duration));
                    resume_at = -1;
                } else {
                    continue;
                }
            }

            while (jump_i < jumps.size() && jumps[jump_i].time <= t) {
                fundamental_ *= jumps[jump_i].factor;
                event(t, "fundamental", format_double(fundamental_));
                ++jump_i;
            }

            const SessionPhase phase = session.phase(t);
            if (phase == SessionPhase::Closed && t >= session.schedule().close_time) break;
            if (phase != prev_phase) {
                event(t, "phase", to_string(phase));
                prev_phase = phase;
            }

            for (const Quote& q : book_.expire(t)) record_removal(q, t, RemovalReason::Expire);

            if ((t - open_abs) % cfg_.snapshot_interval_ms == 0) take_snapshot(t);

            if (phase == SessionPhase::PreOpen || phase == SessionPhase::Closed) continue;

            step_agents(session, t, day);
        }

        close_day(session, day);
    }

    void step_agents(const Session& session, TimeMs t, Day day) {
        // Common snapshot all agents decide against this tick; actions are
        // applied sequentially in the permuted order.
        MarketView common;
        common.time = t;
        common.day = day;
        const TopOfBook top = book_.best_bid_ask();
        common.best_bid = top.bid;
        common.best_ask = top.ask;
        common.recent_trades = &recent_trades_;
        common.mid_history = &mid_history_;
        common.min_quote_size = session.min_quote_size(t).value();
        common.min_validto = std::max(session.min_validto(t).value(), cfg_.book.min_validto_ms);
        common.nms = cfg_.asset.nms;
        common.price_step = cfg_.book.price_step;
        common.expiry_grid = cfg_.book.expiry_grid_ms;
        common.haircut_rate = cfg_.lock.haircut_rate;
        common.lock_enabled = cfg_.lock.enabled;
        common.tick_value = cfg_.asset.tick_value;
        if (auto m = common.mid())
            common.reference_price = static_cast<Price>(std::llround(*m));
        else
            common.reference_price = last_trade_price_;

        // Fresh uniform permutation each tick, drawn from per-agent streams so
        // adding an agent never reorders the existing ones.
        std::vector<std::pair<std::uint64_t, std::size_t>> order;
        order.reserve(agents_.size());
        for (std::size_t i = 0; i < agents_.size(); ++i) order.emplace_back(order_rngs_[i].next_u64(), i);
        std::sort(order.begin(), order.end());

        for (const auto& [prio, idx] : order) {
            Agent& agent = *agents_[idx];
            MarketView view = common;
            if (agent.kind() == AgentKind::Value) view.fundamental = fundamental_;
            const auto holding = registry_.holdings(agent.id(), cfg_.asset.issuer);
            const Account& acct = accounts_[agent.id()];
            view.cash_available = acct.cash - acct.reserved_cash;
            view.inventory = holding.locked + holding.unlocked;
            view.shares_available = view.inventory - acct.reserved_shares;
            view.unlocked_available = std::max<Volume>(0, holding.unlocked - acct.reserved_shares);

            for (const auto& action : agent.decide(view, decide_rngs_[idx]))
                apply_action(agent, action, session, t, day);
        }
    }

    void apply_action(Agent& agent, const AgentAction& action, const Session& session, TimeMs t, Day day) {
        if (const auto* submit = std::get_if<SubmitAction>(&action)) {
            apply_submit(agent, *submit, session, t, day);
        } else if (const auto* cancel = std::get_if<CancelAction>(&action)) {
            std::optional<Quote> before;
            if (const Quote* p = book_.find(cancel->id)) before = *p;
            auto res = book_.cancel(cancel->id, t);
            if (res.ok() && before)
                record_removal(*before, t, RemovalReason::Cancel);
            else if (!res.ok())
                event(t, "reject", "op=cancel agent=" + std::to_string(agent.id()) +
                                       " reason=" + to_string(res.error()));
        } else if (const auto* conv = std::get_if<ConvertAction>(&action)) {
            auto res = book_.convert_rolling(conv->id, t);
            if (!res.ok())
                event(t, "reject", "op=convert agent=" + std::to_string(agent.id()) +
                                       " reason=" + to_string(res.error()));
        } else if (const auto* ext = std::get_if<ExtendAction>(&action)) {
            auto res = book_.extend_validity(ext->id, ext->new_expiry, t);
            if (!res.ok())
                event(t, "reject", "op=extend agent=" + std::to_string(agent.id()) +
                                       " reason=" + to_string(res.error()));
        }
    }

    void apply_submit(Agent& agent, const SubmitAction& submit, const Session& session, TimeMs t, Day day) {
        QuoteRequest req{submit.side, submit.price, submit.volume, submit.validity, agent.id()};

        if (auto admitted = session.admit(req, t); !admitted.ok()) {
            ++result_.rejected_submissions;
            event(t, "reject", "op=submit agent=" + std::to_string(agent.id()) +
                                   " reason=" + to_string(admitted.error()));
            return;
        }

        // Budget backstop: worst-case commitment against current availability.
        Account& acct = accounts_[agent.id()];
        if (submit.side == Side::Buy) {
            const Money worst = submit.price * cfg_.asset.tick_value * submit.volume;
            if (worst > acct.cash - acct.reserved_cash) {
                ++result_.budget_rejections;
                event(t, "reject", "op=submit agent=" + std::to_string(agent.id()) + " reason=BudgetExceeded");
                return;
            }
        } else {
            const auto holding = registry_.holdings(agent.id(), cfg_.asset.issuer);
            if (submit.volume > holding.locked + holding.unlocked - acct.reserved_shares) {
                ++result_.budget_rejections;
                event(t, "reject", "op=submit agent=" + std::to_string(agent.id()) + " reason=BudgetExceeded");
                return;
            }
        }

        auto res = book_.submit(req, t, cfg_.regime);
        if (!res.ok()) {
            ++result_.rejected_submissions;
            event(t, "reject", "op=submit agent=" + std::to_string(agent.id()) +
                                   " reason=" + to_string(res.error()));
            return;
        }
        const SubmitOutcome& out = res.value();

        for (const Trade& fill : out.fills) settle(fill, day);

        if (out.resting) {
            const Quote* q = book_.find(*out.resting);
            QuoteLogRecord rec;
            rec.id = q->id;
            rec.owner = q->owner;
            rec.side = q->side;
            rec.price = q->price;
            rec.volume = q->volume;
            rec.validity = q->validity;
            rec.submit_time = t;
            quote_index_[q->id] = result_.quote_log.size();
            result_.quote_log.push_back(rec);

            if (q->side == Side::Buy)
                acct.reserved_cash += q->price * cfg_.asset.tick_value * q->remaining;
            else
                acct.reserved_shares += q->remaining;
            agent.on_quote_rested(q->id, submit);
        }
    }

    void settle(const Trade& fill, Day day) {
        auto settled = registry_.settle_trade(fill, cfg_.asset.issuer, day);
        if (!settled.ok()) throw SimError(std::string("settlement failed: ") + to_string(settled.error()));
        const Settlement& s = settled.value();

        accounts_[fill.buyer].cash += s.buyer_cash_delta;
        accounts_[fill.seller].cash += s.seller_cash_delta;
        result_.total_haircut += s.haircut;

        // The maker's reservation is released by the filled amount.
        const AgentId maker = fill.aggressor == Side::Buy ? fill.seller : fill.buyer;
        Account& maker_acct = accounts_[maker];
        if (fill.aggressor == Side::Buy)
            maker_acct.reserved_shares -= fill.volume;
        else
            maker_acct.reserved_cash -= fill.price * cfg_.asset.tick_value * fill.volume;

        Trade recorded = fill;
        recorded.haircut = s.haircut;
        result_.tape.push_back(recorded);
        last_trade_price_ = fill.price;

        recent_trades_.push_back({fill.price, fill.volume, fill.time, fill.aggressor});
        if (recent_trades_.size() > kTradeWindow) recent_trades_.pop_front();

        if (Agent* a = owner_agent(fill.buyer)) a->on_trade(fill, fill.aggressor == Side::Sell);
        if (fill.seller != fill.buyer)
            if (Agent* a = owner_agent(fill.seller)) a->on_trade(fill, fill.aggressor == Side::Buy);

        // A fully consumed maker quote is gone from the book: log its removal.
        if (book_.find(fill.maker_quote_id) == nullptr) {
            auto it = quote_index_.find(fill.maker_quote_id);
            if (it != quote_index_.end()) {
                auto& rec = result_.quote_log[it->second];
                if (!rec.removal_time) {
                    rec.removal_time = fill.time;
                    rec.reason = RemovalReason::Fill;
                    if (Agent* a = owner_agent(rec.owner)) a->on_quote_removed(rec.id, RemovalReason::Fill);
                }
            }
        }
    }

    Agent* owner_agent(AgentId id) {
        if (id < 1 || static_cast<std::size_t>(id) > agents_.size()) return nullptr;
        return agents_[static_cast<std::size_t>(id) - 1].get();
    }

    void record_removal(const Quote& q, TimeMs t, RemovalReason reason) {
        auto it = quote_index_.find(q.id);
        if (it != quote_index_.end()) {
            auto& rec = result_.quote_log[it->second];
            if (!rec.removal_time) {
                rec.removal_time = t;
                rec.reason = reason;
            }
        }
        Account& acct = accounts_[q.owner];
        if (q.side == Side::Buy)
            acct.reserved_cash -= q.price * cfg_.asset.tick_value * q.remaining;
        else
            acct.reserved_shares -= q.remaining;
        if (Agent* a = owner_agent(q.owner)) a->on_quote_removed(q.id, reason);
    }

    void clear_book(TimeMs t) {
        for (const Quote& q : book_.clear()) record_removal(q, t, RemovalReason::SessionClose);
    }

    void take_snapshot(TimeMs t) {
        BookSnapshot s;
        s.time = t;
        const TopOfBook top = book_.best_bid_ask();
        if (top.bid) {
            s.bid_price = top.bid->first;
            s.bid_size = top.bid->second;
        }
        if (top.ask) {
            s.ask_price = top.ask->first;
            s.ask_size = top.ask->second;
        }
        if (auto d = book_.depth(cfg_.metrics.band_fraction); d.ok()) s.depth_band = d.value();
        s.band_fraction = cfg_.metrics.band_fraction;
        s.resting_quotes = static_cast<Volume>(book_.resting_count());
        if (auto m = s.mid()) {
            mid_history_.push_back(*m);
            if (mid_history_.size() > kTradeWindow) mid_history_.pop_front();
        }
        result_.snapshots.push_back(s);
    }

    void close_day(Session& session, Day day) {
        const TimeMs close_t = std::min(session.schedule().close_time, (day + 1) * cfg_.day_length_ms);
        clear_book(close_t);
        event(close_t, "day_close", "day=" + std::to_string(day));

        auto unlocked = registry_.daily_unlock(cfg_.asset.issuer, day, registry_rng_);
        if (!unlocked.ok()) throw SimError("daily unlock failed");
        event(close_t, "unlock", "day=" + std::to_string(day) + " count=" + std::to_string(unlocked.value()));
        const Volume forced = registry_.force_unlock(cfg_.asset.issuer, day);
        if (forced > 0)
            event(close_t, "force_unlock", "day=" + std::to_string(day) + " count=" + std::to_string(forced));

        for (AgentId owner : registry_.owners(cfg_.asset.issuer)) {
            const auto h = registry_.holdings(owner, cfg_.asset.issuer);
            result_.ledger_rows.push_back(
                {day, owner, cfg_.asset.issuer, h.locked, h.unlocked, registry_.treasury(cfg_.asset.issuer)});
        }
    }

    void finish() {
        result_.metrics = compute_metrics(result_.tape, result_.snapshots, cfg_.metrics);
        std::vector<QuoteLifecycle> lifecycle;
        lifecycle.reserve(result_.quote_log.size());
        for (const auto& q : result_.quote_log)
            lifecycle.push_back({q.id, q.submit_time, q.removal_time, q.reason});
        fill_resting_times(result_.metrics, lifecycle);

        result_.unlock_log = registry_.unlock_log();
        result_.issuer_treasury = registry_.treasury(cfg_.asset.issuer);
        for (const auto& s : specs_) {
            const auto h = registry_.holdings(s.id, cfg_.asset.issuer);
            result_.agents.push_back({s.id, s.kind, accounts_[s.id].cash, h.locked, h.unlocked});
        }
    }

    static constexpr std::size_t kTradeWindow = 1024;

    const ScenarioConfig& cfg_;
    OrderBook book_;
    ShareRegistry registry_;
    Rng fundamental_rng_;
    Rng registry_rng_;
    std::vector<AgentSpec> specs_;
    std::vector<std::unique_ptr<Agent>> agents_;
    std::vector<Rng> decide_rngs_;
    std::vector<Rng> order_rngs_;
    std::map<AgentId, Account> accounts_;
    std::map<QuoteId, std::size_t> quote_index_;
    std::deque<TradeView> recent_trades_;
    std::deque<double> mid_history_;
    double fundamental_ = 0.0;
    Price last_trade_price_ = 0;
    RunResult result_;
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    return sim.run();
}

void write_run_output(const RunResult& result, const ScenarioConfig& cfg, const std::string& config_name,
                      const std::string& config_text, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto p = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    write_trades_csv(p("trades.csv"), result.tape, cfg.day_length_ms);
    write_trades_jsonl(p("trades.jsonl"), result.tape, cfg.day_length_ms);
    write_snapshots_csv(p("snapshots.csv"), result.snapshots, cfg.day_length_ms);
    write_snapshots_jsonl(p("snapshots.jsonl"), result.snapshots, cfg.day_length_ms);
    write_quotes_csv(p("quotes.csv"), result.quote_log);
    write_ledger_csv(p("ledger.csv"), result.ledger_rows);
    write_ledger_jsonl(p("ledger.jsonl"), result.ledger_rows);
    write_metrics_csv(p("metrics.csv"), result.metrics);
    write_metrics_jsonl(p("metrics.jsonl"), result.metrics);
    write_events_jsonl(p("events.jsonl"), result.events);

    RunManifest m;
    m.code_version = kCodeVersion;
    m.config_name = config_name;
    m.config_hash = fnv_hex(config_text);
    m.seed = cfg.seed;
    m.trade_count = static_cast<std::int64_t>(result.tape.size());
    m.files = {"trades.csv",  "trades.jsonl", "snapshots.csv", "snapshots.jsonl", "quotes.csv",
               "ledger.csv",  "ledger.jsonl", "metrics.csv",   "metrics.jsonl",   "events.jsonl"};
    write_manifest(p("manifest.json"), m);
}

}  // namespace mktsim
