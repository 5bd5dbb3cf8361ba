#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "mktsim/rng.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

// The five components of a market maker's half-spread, in ticks. The
// free-option component scales with how long the quote must be held open and
// with volatility; inventory pressure skews the quote midpoint rather than
// widening the spread.
struct SpreadComponents {
    double handling = 1.0;
    double noncompetitive = 0.0;       // competitive venue by default
    double inventory_coeff = 0.0;      // ticks per unit of inventory imbalance q/q_max
    double adverse = 0.0;
    double free_option_coeff = 0.0;    // ticks per (ms of quote life x volatility unit)
};

double mm_half_spread(const SpreadComponents& c, TimeMs quote_life_ms, double sigma);
double mm_inventory_skew(const SpreadComponents& c, Volume q, Volume q_max);

struct MmQuotes {
    Price bid = 0;
    Price ask = 0;
};

// Quote pair around `center` with the component-driven half-spread and
// inventory skew, snapped to the price grid. ask - bid equals the ideal
// spread rounded up to the grid (at most one step of widening).
MmQuotes mm_quote_prices(double center, const SpreadComponents& c, Volume q, Volume q_max,
                         TimeMs quote_life_ms, double sigma, Price price_step);

struct TradeView {
    Price price = 0;
    Volume volume = 0;
    TimeMs time = 0;
    Side aggressor = Side::Buy;
};

// Read-only snapshot handed to an agent at decision time. Common market data
// is shared; the "own" section is assembled per agent.
struct MarketView {
    TimeMs time = 0;
    Day day = 0;
    std::optional<std::pair<Price, Volume>> best_bid;
    std::optional<std::pair<Price, Volume>> best_ask;
    const std::deque<TradeView>* recent_trades = nullptr;
    const std::deque<double>* mid_history = nullptr;
    std::optional<double> fundamental;  // populated for value agents only
    Volume min_quote_size = 1;
    TimeMs min_validto = 0;
    Volume nms = 1;
    Price reference_price = 1;  // mid if defined, else last trade, else the initial price
    Price price_step = 1;
    TimeMs expiry_grid = 1;
    double haircut_rate = 0.0;
    bool lock_enabled = false;

    Money cash_available = 0;        // cash minus reservations for live buy quotes
    Volume shares_available = 0;     // holdings minus reservations for live sell quotes
    Volume unlocked_available = 0;
    Volume inventory = 0;            // total shares held
    Money tick_value = 1;

    std::optional<double> mid() const {
        if (!best_bid || !best_ask) return std::nullopt;
        return (static_cast<double>(best_bid->first) + static_cast<double>(best_ask->first)) / 2.0;
    }
};

struct SubmitAction {
    Side side = Side::Buy;
    Price price = 0;
    Volume volume = 0;
    Validity validity;
};
struct CancelAction {
    QuoteId id = 0;
};
struct ConvertAction {
    QuoteId id = 0;
};
struct ExtendAction {
    QuoteId id = 0;
    TimeMs new_expiry = 0;
};
using AgentAction = std::variant<SubmitAction, CancelAction, ConvertAction, ExtendAction>;

enum class AgentKind : std::uint8_t { Zi, MarketMaker, Momentum, Value, Block };

inline const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::Zi: return "zi";
        case AgentKind::MarketMaker: return "market_maker";
        case AgentKind::Momentum: return "momentum";
        case AgentKind::Value: return "value";
        case AgentKind::Block: return "block";
    }
    return "?";
}

struct ZiParams {
    double arrival_prob = 0.05;  // per decision tick
    Price band_ticks = 50;       // uniform offset around the reference price
    Volume volume = 0;           // 0 = one NMS
    TimeMs validity_ms = 10000;
};

struct MarketMakerParams {
    SpreadComponents components;
    Volume size = 0;  // 0 = one NMS; size 0 after resolution disables the agent
    Volume q_max = 10000;
    Volume target_inventory = 0;
    double sigma = 0.0;
    TimeMs validity_ms = 10000;
};

struct MomentumParams {
    int window = 10;          // trailing trades for the return signal
    double threshold = 0.005;
    double size_scale = 0.0;  // shares per unit of log return
    Volume max_size = 0;
    Volume max_inventory = 0;
    Price slip_ticks = 5;
    TimeMs validity_ms = 10000;
    bool haircut_aware = true;  // skip locked sales whose haircut eats the expected edge
};

struct ValueParams {
    double theta = 0.05;            // no-trade band around the assessed value
    Volume target = 0;              // desired holding
    Volume base_size = 0;           // per-quote size outside ramps; 0 = one NMS
    double size_risk_coeff = 0.0;   // extra margin (ticks) per NMS-multiple of committed size
    Price repost_delta_ticks = 1;   // repost when the desired price moved this far
    TimeMs validity_ms = 30000;
    TimeMs min_interval_ms = 0;     // pacing: at most one order per interval (0 = every tick)
};

struct BlockParams {
    Side side = Side::Buy;
    Volume parent = 0;
    Volume child = 0;
    TimeMs interval_ms = 30000;
    TimeMs start_ms = 0;  // absolute sim time of the first child
    Price slip_ticks = 10;
    TimeMs validity_ms = 10000;
};

using AgentParams = std::variant<ZiParams, MarketMakerParams, MomentumParams, ValueParams, BlockParams>;

struct AgentSpec {
    AgentId id = 0;
    AgentKind kind = AgentKind::Zi;
    AgentParams params;
    Money cash = 0;
    Volume shares = 0;  // endowment, granted unlocked
};

class Agent {
public:
    explicit Agent(AgentSpec spec) : spec_(std::move(spec)) {}
    virtual ~Agent() = default;

    const AgentSpec& spec() const { return spec_; }
    AgentId id() const { return spec_.id; }
    AgentKind kind() const { return spec_.kind; }

    virtual std::vector<AgentAction> decide(const MarketView& view, Rng& rng) = 0;

    // Harness notifications.
    virtual void on_quote_rested(QuoteId, const SubmitAction&) {}
    virtual void on_quote_removed(QuoteId, RemovalReason) {}
    virtual void on_trade(const Trade&, bool /*as_maker*/) {}

protected:
    AgentSpec spec_;
};

std::unique_ptr<Agent> make_agent(AgentSpec spec);

// Marketable-limit validity: the configured preference, raised to the session
// minimum, snapped up to the expiry grid.
Validity clamp_validity(TimeMs now, TimeMs preferred_ms, TimeMs min_validto, TimeMs grid);

}  // namespace mktsim
