#include "mktsim/session.hpp"

#include <cmath>

namespace mktsim {

SessionPhase Session::phase(TimeMs t) const {
    if (halted_ && t >= halted_at_) return SessionPhase::Closed;
    if (t < sched_.open_time) return SessionPhase::PreOpen;
    if (t >= sched_.close_time) return SessionPhase::Closed;
    if (in_opening_ramp(t)) return SessionPhase::OpeningRamp;
    if (in_closing_ramp(t)) return SessionPhase::ClosingRamp;
    return SessionPhase::Continuous;
}

bool Session::in_opening_ramp(TimeMs t) const {
    return sched_.ramp_mode != RampMode::None && t >= sched_.open_time &&
           t < sched_.open_time + sched_.ramp_duration && t < sched_.close_time;
}

bool Session::in_closing_ramp(TimeMs t) const {
    return sched_.ramp_mode != RampMode::None && t < sched_.close_time &&
           t >= sched_.close_time - sched_.ramp_duration &&
           t >= sched_.open_time + sched_.ramp_duration;  // opening ramp wins on overlap
}

double Session::ramp_value(double start, double end, TimeMs t) const {
    double u;
    if (in_opening_ramp(t)) {
        u = static_cast<double>(t - sched_.open_time) / static_cast<double>(sched_.ramp_duration);
    } else {
        // closing ramp mirrors the opening one
        u = 1.0 - static_cast<double>(t - (sched_.close_time - sched_.ramp_duration)) /
                      static_cast<double>(sched_.ramp_duration);
    }
    if (sched_.decay == RampDecay::Linear) return start + (end - start) * u;
    return start * std::pow(end / start, u);
}

Result<Volume> Session::min_quote_size(TimeMs t) const {
    const SessionPhase p = phase(t);
    if (p == SessionPhase::PreOpen || p == SessionPhase::Closed) return Reject::OutsideSession;
    if (sched_.ramp_mode != RampMode::Size) return sched_.nms;
    if (p == SessionPhase::Continuous) return sched_.nms;
    const double start = sched_.size_multiple_start * static_cast<double>(sched_.nms);
    return static_cast<Volume>(std::llround(ramp_value(start, static_cast<double>(sched_.nms), t)));
}

Result<TimeMs> Session::min_validto(TimeMs t) const {
    const SessionPhase p = phase(t);
    if (p == SessionPhase::PreOpen || p == SessionPhase::Closed) return Reject::OutsideSession;
    if (sched_.ramp_mode != RampMode::ValidTo) return sched_.min_validto_floor;
    if (p == SessionPhase::Continuous) return sched_.min_validto_floor;
    return static_cast<TimeMs>(std::llround(ramp_value(static_cast<double>(sched_.min_validto_start),
                                                       static_cast<double>(sched_.min_validto_floor), t)));
}

Result<Ack> Session::admit(const QuoteRequest& req, TimeMs t) const {
    const SessionPhase p = phase(t);
    if (p == SessionPhase::PreOpen || p == SessionPhase::Closed) return Reject::SessionClosed;
    if (req.volume < min_quote_size(t).value()) return Reject::TooSmall;
    const TimeMs span = req.validity.is_rolling() ? req.validity.value : req.validity.value - t;
    if (span < min_validto(t).value()) return Reject::ValidityTooShort;
    return Ack{};
}

void Session::halt(TimeMs t) {
    halted_ = true;
    halted_at_ = t;
}

Result<SessionSchedule> Session::restart(TimeMs t_resume) {
    if (!halted_) return Reject::NotHalted;
    const TimeMs length = sched_.close_time - sched_.open_time;
    sched_.open_time = t_resume;
    sched_.close_time = t_resume + length;
    halted_ = false;
    return sched_;
}

}  // namespace mktsim
