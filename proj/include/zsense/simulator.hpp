#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "zsense/signal_core.hpp"

namespace zsense {

// Mini-fridge compressor cycling at the RMS-record level. Durations are in
// seconds and are rounded to whole record intervals when generated.
struct ApplianceProfile {
  double on_rms_min_amps = 0.86;
  double on_rms_max_amps = 0.88;
  double off_rms_amps = 0.07;
  double off_rms_min_amps = 0.06;
  double off_rms_max_amps = 0.09;
  double on_duration_mean_s = 1800.0;
  double on_duration_jitter = 0.10;  // uniform +/- fraction of the mean
  double off_duration_mean_s = 2700.0;
  double off_duration_jitter = 0.10;
  double rms_noise_amps = 0.002;
  EpochSeconds record_interval_s = 30;
  EpochSeconds start_epoch_s = 1'700'000'000;

  void validate() const;
};

enum class ScenarioKind { ThermostatLongOn, DoorOpen, PowerDisruption };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view text);

// start_s is an offset from the trace start. The scenario takes effect at
// the first matching segment boundary at or after start_s: an ON-cycle start
// for ThermostatLongOn and DoorOpen, an OFF-gap start for PowerDisruption.
//
// magnitude_s:
//   ThermostatLongOn  total length of the stretched ON cycle (default 5 h)
//   DoorOpen          door-open time; the ON cycle runs an extra 2-4x that
//   PowerDisruption   length of the forced OFF period (default 2 h)
struct AnomalyScenario {
  ScenarioKind kind = ScenarioKind::ThermostatLongOn;
  EpochSeconds start_s = 0;
  double magnitude_s = 0.0;

  static AnomalyScenario long_on(EpochSeconds start_s, double seconds = 5 * 3600.0) {
    return {ScenarioKind::ThermostatLongOn, start_s, seconds};
  }
  static AnomalyScenario door_open(EpochSeconds start_s, double seconds = 15 * 60.0) {
    return {ScenarioKind::DoorOpen, start_s, seconds};
  }
  static AnomalyScenario power_disruption(EpochSeconds start_s,
                                          double seconds = 2 * 3600.0) {
    return {ScenarioKind::PowerDisruption, start_s, seconds};
  }
  // Scenario of the given kind with its default magnitude.
  static AnomalyScenario make(ScenarioKind kind, EpochSeconds start_s) {
    switch (kind) {
      case ScenarioKind::DoorOpen:
        return door_open(start_s);
      case ScenarioKind::PowerDisruption:
        return power_disruption(start_s);
      case ScenarioKind::ThermostatLongOn:
        break;
    }
    return long_on(start_s);
  }
};

// Absolute epoch interval covered by one injected anomaly.
struct GroundTruthLabel {
  EpochSeconds window_start_s = 0;
  EpochSeconds window_end_s = 0;
  ScenarioKind kind = ScenarioKind::ThermostatLongOn;

  friend bool operator==(const GroundTruthLabel&, const GroundTruthLabel&) = default;
};

struct Trace {
  std::vector<RmsRecord> records;
  std::vector<GroundTruthLabel> labels;
};

// Deterministic for a given seed. Records lie on the lattice
// start_epoch_s + k * record_interval_s, k < duration_s / record_interval_s,
// and RMS values are quantized to 0.1 mA (the log's resolution).
// Throws InvalidScenario for overlapping scenarios, starts outside the
// trace, or a scenario that cannot complete before the trace ends.
Trace generate_trace(const ApplianceProfile& profile,
                     std::vector<AnomalyScenario> scenarios,
                     EpochSeconds duration_s, std::uint64_t seed);

// Four scenarios mirroring the deployment: one 5 h long-ON run, two 15 min
// door openings and a 2 h power disruption, all after the training window of
// a 14-day trace.
std::vector<AnomalyScenario> deployment_scenarios();

inline constexpr EpochSeconds kFourteenDays = 14 * 24 * 3600;

// A*sin(2*pi*f*i/fs) with A = target*sqrt(2), plus Gaussian noise.
SampleBlock generate_waveform(double target_rms_amps, std::size_t n_samples,
                              double mains_hz, double sample_rate_hz,
                              double noise_std_amps, std::uint64_t seed);

inline constexpr std::string_view kLabelsHeader = "window_start,window_end,kind";

void write_labels(std::ostream& out, const std::vector<GroundTruthLabel>& labels);
std::vector<GroundTruthLabel> parse_labels(std::istream& in);

// Traces use the log schema with empty z-score and zero flag.
void write_trace(std::ostream& out, const std::vector<RmsRecord>& records);
std::vector<RmsRecord> parse_trace(std::istream& in);

}  // namespace zsense
