#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "zsense/anomaly_event.hpp"
#include "zsense/signal_core.hpp"

namespace zsense {

enum class CompressorState { Off, On };

// Hysteresis band separating the OFF cluster (~0.07 A) from the ON cluster
// (~0.87 A). Off->On needs rms > on_enter_amps, On->Off needs
// rms < off_enter_amps.
struct StateThresholds {
  double on_enter_amps = 0.45;
  double off_enter_amps = 0.20;

  void validate() const;
};

inline constexpr std::size_t kFeatureCount = 5;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "rms_last", "rms_mean", "rms_std", "rms_slope", "duration_on"};

// Per-cycle summary fed to the z-score model.
struct CycleFeatures {
  double rms_last_amps = 0.0;
  double rms_mean_amps = 0.0;
  double rms_std_amps = 0.0;  // population form
  double rms_slope_amps_per_s = 0.0;
  double duration_on_s = 0.0;

  std::array<double, kFeatureCount> to_array() const {
    return {rms_last_amps, rms_mean_amps, rms_std_amps, rms_slope_amps_per_s,
            duration_on_s};
  }
  static CycleFeatures from_array(const std::array<double, kFeatureCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }

  friend bool operator==(const CycleFeatures&, const CycleFeatures&) = default;
};

struct CompletedCycle {
  CycleFeatures features;
  EpochSeconds start_s = 0;  // first record classified On
  EpochSeconds end_s = 0;    // record that triggered On->Off
};

struct WatchdogConfig {
  EpochSeconds off_limit_s = 3600;

  void validate() const;
};

CompressorState classify_state(double rms_amps, CompressorState prev,
                               const StateThresholds& thresholds);

// Fires when the OFF period has lasted strictly longer than the limit and
// has not fired yet. The caller owns the once-per-period flag.
std::optional<AnomalyEvent> check_watchdog(EpochSeconds now_s,
                                           EpochSeconds off_since_s,
                                           const WatchdogConfig& config,
                                           bool already_fired);

// Streaming ON/OFF segmentation with constant-size per-cycle accumulators.
//
// Sums are kept relative to the first record of the cycle (value and time
// shift), so a constant cycle yields std and slope of exactly zero and the
// regression stays well conditioned at epoch-scale timestamps.
class CycleTracker {
 public:
  explicit CycleTracker(StateThresholds thresholds = {});

  // Returns the completed cycle on the On->Off transition, nothing otherwise.
  // Throws StreamOrderError if the timestamp does not advance.
  std::optional<CompletedCycle> ingest(const RmsRecord& record);

  CompressorState state() const noexcept { return state_; }
  // Timestamp of the first record of the current OFF period; empty while ON
  // or before any record.
  std::optional<EpochSeconds> off_since() const noexcept;
  const StateThresholds& thresholds() const noexcept { return thresholds_; }

 private:
  struct Accumulator {
    std::size_t count = 0;
    EpochSeconds t0 = 0;
    double rms0 = 0.0;
    double last = 0.0;
    double sum_d = 0.0;   // sum of (rms - rms0)
    double sum_dd = 0.0;  // sum of (rms - rms0)^2
    double sum_t = 0.0;   // sum of (t - t0)
    double sum_tt = 0.0;
    double sum_td = 0.0;

    void reset(EpochSeconds t, double rms);
    void add(EpochSeconds t, double rms);
    CycleFeatures finish(EpochSeconds end_s) const;
  };

  StateThresholds thresholds_;
  CompressorState state_ = CompressorState::Off;
  bool seen_any_ = false;
  EpochSeconds last_ts_ = 0;
  EpochSeconds off_since_ = 0;
  Accumulator acc_;
};

}  // namespace zsense
