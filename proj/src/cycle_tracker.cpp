#include "zsense/cycle_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zsense/errors.hpp"

namespace zsense {

void StateThresholds::validate() const {
  if (!(off_enter_amps > 0.0) || !(on_enter_amps > off_enter_amps) ||
      !std::isfinite(on_enter_amps)) {
    throw InvalidInput("state thresholds need 0 < off_enter < on_enter");
  }
}

void WatchdogConfig::validate() const {
  if (off_limit_s <= 0) {
    throw InvalidInput("watchdog off limit must be positive");
  }
}

CompressorState classify_state(double rms_amps, CompressorState prev,
                               const StateThresholds& thresholds) {
  if (prev == CompressorState::Off) {
    return rms_amps > thresholds.on_enter_amps ? CompressorState::On
                                               : CompressorState::Off;
  }
  return rms_amps < thresholds.off_enter_amps ? CompressorState::Off
                                              : CompressorState::On;
}

std::optional<AnomalyEvent> check_watchdog(EpochSeconds now_s,
                                           EpochSeconds off_since_s,
                                           const WatchdogConfig& config,
                                           bool already_fired) {
  if (already_fired || now_s - off_since_s <= config.off_limit_s) {
    return std::nullopt;
  }
  AnomalyEvent event;
  event.kind = EventKind::Watchdog;
  event.detected_at_s = now_s;
  event.cycle_start_s = off_since_s;
  event.cycle_end_s = now_s;
  return event;
}

void CycleTracker::Accumulator::reset(EpochSeconds t, double rms) {
  *this = Accumulator{};
  t0 = t;
  rms0 = rms;
  add(t, rms);
}

void CycleTracker::Accumulator::add(EpochSeconds t, double rms) {
  const double dt = static_cast<double>(t - t0);
  const double d = rms - rms0;
  ++count;
  last = rms;
  sum_d += d;
  sum_dd += d * d;
  sum_t += dt;
  sum_tt += dt * dt;
  sum_td += dt * d;
}

CycleFeatures CycleTracker::Accumulator::finish(EpochSeconds end_s) const {
  const double n = static_cast<double>(count);
  CycleFeatures f;
  f.rms_last_amps = last;
  f.rms_mean_amps = rms0 + sum_d / n;
  f.rms_std_amps = std::sqrt(std::max(0.0, (sum_dd - sum_d * sum_d / n) / n));
  const double sxx = n * sum_tt - sum_t * sum_t;
  f.rms_slope_amps_per_s =
      (count < 2 || sxx <= 0.0) ? 0.0 : (n * sum_td - sum_t * sum_d) / sxx;
  f.duration_on_s = static_cast<double>(end_s - t0);
  return f;
}

CycleTracker::CycleTracker(StateThresholds thresholds)
    : thresholds_(thresholds) {
  thresholds_.validate();
}

std::optional<EpochSeconds> CycleTracker::off_since() const noexcept {
  if (!seen_any_ || state_ == CompressorState::On) return std::nullopt;
  return off_since_;
}

std::optional<CompletedCycle> CycleTracker::ingest(const RmsRecord& record) {
  if (seen_any_ && record.timestamp_s <= last_ts_) {
    throw StreamOrderError("timestamp " + std::to_string(record.timestamp_s) +
                           " does not follow " + std::to_string(last_ts_));
  }
  if (!std::isfinite(record.rms_amps) || record.rms_amps < 0.0) {
    throw InvalidInput("RMS value must be finite and non-negative");
  }
  const bool first = !seen_any_;
  seen_any_ = true;
  last_ts_ = record.timestamp_s;

  const CompressorState next =
      classify_state(record.rms_amps, state_, thresholds_);
  std::optional<CompletedCycle> done;

  if (state_ == CompressorState::Off && next == CompressorState::On) {
    acc_.reset(record.timestamp_s, record.rms_amps);
  } else if (state_ == CompressorState::On && next == CompressorState::On) {
    acc_.add(record.timestamp_s, record.rms_amps);
  } else if (state_ == CompressorState::On && next == CompressorState::Off) {
    done = CompletedCycle{acc_.finish(record.timestamp_s), acc_.t0,
                          record.timestamp_s};
    off_since_ = record.timestamp_s;
  } else if (first) {
    off_since_ = record.timestamp_s;
  }
  state_ = next;
  return done;
}

}  // namespace zsense
