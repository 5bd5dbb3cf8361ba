#pragma once

#include "mktsim/book.hpp"
#include "mktsim/types.hpp"

namespace mktsim {

enum class RampMode : std::uint8_t { None, Size, ValidTo };
enum class RampDecay : std::uint8_t { Linear, Exponential };

inline const char* to_string(RampMode m) {
    switch (m) {
        case RampMode::None: return "none";
        case RampMode::Size: return "size";
        case RampMode::ValidTo: return "validto";
    }
    return "?";
}

struct SessionSchedule {
    TimeMs open_time = 0;
    TimeMs close_time = 0;
    TimeMs ramp_duration = 30 * 60 * 1000;
    RampMode ramp_mode = RampMode::None;
    Volume nms = 1000;                       // normal market size == normal minimum quote size
    double size_multiple_start = 50.0;       // opening minimum trade size, in multiples of NMS
    TimeMs min_validto_start = 5 * 60 * 1000;
    TimeMs min_validto_floor = 5000;
    RampDecay decay = RampDecay::Linear;
};

enum class SessionPhase : std::uint8_t { PreOpen, OpeningRamp, Continuous, ClosingRamp, Closed };

inline const char* to_string(SessionPhase p) {
    switch (p) {
        case SessionPhase::PreOpen: return "pre_open";
        case SessionPhase::OpeningRamp: return "opening_ramp";
        case SessionPhase::Continuous: return "continuous";
        case SessionPhase::ClosingRamp: return "closing_ramp";
        case SessionPhase::Closed: return "closed";
    }
    return "?";
}

// Session controller: liquidity ramps at open/close and quote admission
// against the current minima. Opening a market "cold" starts with either a
// very large minimum trade size or a minutes-long minimum quote length and
// relaxes it to the normal floor across the ramp, so bids and asks approach
// each other gradually instead of through an auction cross.
class Session {
public:
    explicit Session(SessionSchedule sched) : sched_(sched) {}

    const SessionSchedule& schedule() const { return sched_; }
    SessionPhase phase(TimeMs t) const;
    bool halted() const { return halted_; }

    Result<Volume> min_quote_size(TimeMs t) const;
    Result<TimeMs> min_validto(TimeMs t) const;

    Result<Ack> admit(const QuoteRequest& req, TimeMs t) const;

    void halt(TimeMs t);
    // Fresh full-length session whose opening ramp begins at t_resume.
    Result<SessionSchedule> restart(TimeMs t_resume);

private:
    double ramp_value(double start, double end, TimeMs t) const;  // t inside a ramp
    bool in_opening_ramp(TimeMs t) const;
    bool in_closing_ramp(TimeMs t) const;

    SessionSchedule sched_;
    bool halted_ = false;
    TimeMs halted_at_ = 0;
};

}  // namespace mktsim
