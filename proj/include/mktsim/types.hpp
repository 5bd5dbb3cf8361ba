#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mktsim {

using Price = std::int64_t;    // integer ticks, >= 1
using Volume = std::int64_t;   // integer shares, granularity 1
using Money = std::int64_t;    // integer count of the smallest currency unit
using TimeMs = std::int64_t;   // simulation time, milliseconds from sim start
using Day = std::int64_t;      // trading-day index
using AgentId = std::int64_t;
using QuoteId = std::uint64_t;
using IssuerId = std::string;

enum class Side : std::uint8_t { Buy, Sell };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline const char* to_string(Side s) { return s == Side::Buy ? "buy" : "sell"; }

// A quote is either good until a fixed expiry instant or "rolling": its
// effective expiry is always now + length until it is converted.
struct Validity {
    enum class Kind : std::uint8_t { Fixed, Rolling };
    Kind kind = Kind::Fixed;
    TimeMs value = 0;  // Fixed: absolute expiry; Rolling: length

    static Validity fixed(TimeMs expiry) { return {Kind::Fixed, expiry}; }
    static Validity rolling(TimeMs length) { return {Kind::Rolling, length}; }
    bool is_rolling() const { return kind == Kind::Rolling; }
    TimeMs effective_expiry(TimeMs now) const {
        return is_rolling() ? now + value : value;
    }
};

struct Quote {
    QuoteId id = 0;
    Side side = Side::Buy;
    Price price = 0;
    Volume volume = 0;      // original size
    Validity validity;
    AgentId owner = 0;
    std::uint64_t arrival = 0;
    Volume remaining = 0;
    TimeMs submit_time = 0;
};

struct Trade {
    Price price = 0;
    Volume volume = 0;
    AgentId buyer = 0;
    AgentId seller = 0;
    TimeMs time = 0;
    Side aggressor = Side::Buy;
    QuoteId maker_quote_id = 0;
    QuoteId taker_order_id = 0;
    bool self_trade = false;
    Money haircut = 0;  // filled in at settlement; 0 when the lock mechanism is off
};

enum class PriorityRegime : std::uint8_t { PriceTime, PriceValidToVolume };

inline const char* to_string(PriorityRegime r) {
    return r == PriorityRegime::PriceTime ? "price_time" : "price_validto_volume";
}

// Structured rejection reasons shared across book / session / registry.
enum class Reject : std::uint8_t {
    GridViolation,
    ValidityTooShort,
    SessionClosed,
    TooSmall,
    RejectedBeforeValidTo,
    UnknownQuote,
    NotRolling,
    NotFixed,
    NotAnExtension,
    NoMid,
    InsufficientHoldings,
    CalledTwiceSameDay,
    NotHalted,
    OutsideSession,
    BudgetExceeded,
};

inline const char* to_string(Reject r) {
    switch (r) {
        case Reject::GridViolation: return "GridViolation";
        case Reject::ValidityTooShort: return "ValidityTooShort";
        case Reject::SessionClosed: return "SessionClosed";
        case Reject::TooSmall: return "TooSmall";
        case Reject::RejectedBeforeValidTo: return "RejectedBeforeValidTo";
        case Reject::UnknownQuote: return "UnknownQuote";
        case Reject::NotRolling: return "NotRolling";
        case Reject::NotFixed: return "NotFixed";
        case Reject::NotAnExtension: return "NotAnExtension";
        case Reject::NoMid: return "NoMid";
        case Reject::InsufficientHoldings: return "InsufficientHoldings";
        case Reject::CalledTwiceSameDay: return "CalledTwiceSameDay";
        case Reject::NotHalted: return "NotHalted";
        case Reject::OutsideSession: return "OutsideSession";
        case Reject::BudgetExceeded: return "BudgetExceeded";
    }
    return "?";
}

// Minimal expected-style result. Ops that can be rejected return one of these;
// rejections are expected control flow in the simulation, not exceptions.
template <class T>
class Result {
public:
    Result(T value) : value_(std::move(value)) {}       // NOLINT(google-explicit-constructor)
    Result(Reject r) : error_(r) {}                     // NOLINT(google-explicit-constructor)

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }
    const T& value() const { return *value_; }
    T& value() { return *value_; }
    Reject error() const { return error_; }

private:
    std::optional<T> value_;
    Reject error_ = Reject::UnknownQuote;
};

struct Ack {};

enum class RemovalReason : std::uint8_t { Fill, Expire, Cancel, SessionClose };

inline const char* to_string(RemovalReason r) {
    switch (r) {
        case RemovalReason::Fill: return "fill";
        case RemovalReason::Expire: return "expire";
        case RemovalReason::Cancel: return "cancel";
        case RemovalReason::SessionClose: return "close";
    }
    return "?";
}

// Snap t up to the next multiple of grid (grid >= 1).
inline TimeMs snap_up(TimeMs t, TimeMs grid) {
    return ((t + grid - 1) / grid) * grid;
}

inline bool on_grid(TimeMs t, TimeMs grid) { return grid <= 1 || t % grid == 0; }

}  // namespace mktsim
