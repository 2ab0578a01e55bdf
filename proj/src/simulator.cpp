#include "zsense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "zsense/errors.hpp"
#include "zsense/event_log.hpp"

namespace zsense {

namespace {

// mt19937_64 output is fixed by the standard; the conversions below are
// spelled out instead of using <random> distributions, whose algorithms are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, cosine branch only.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

double quantize_amps(double amps) { return std::round(amps * 1e4) / 1e4; }

// Per-cycle ON level, kept three noise sigmas inside the band.
double on_level(const ApplianceProfile& p, Rng& rng) {
  const double margin = 3.0 * p.rms_noise_amps;
  const double lo = p.on_rms_min_amps + margin;
  const double hi = p.on_rms_max_amps - margin;
  if (lo >= hi) return 0.5 * (p.on_rms_min_amps + p.on_rms_max_amps);
  return rng.uniform(lo, hi);
}

std::int64_t to_records(double seconds, EpochSeconds interval) {
  return std::max<std::int64_t>(
      1, std::llround(seconds / static_cast<double>(interval)));
}

// Upper bound on the time a scenario can occupy once anchored.
double nominal_extent(const AnomalyScenario& s, const ApplianceProfile& p) {
  switch (s.kind) {
    case ScenarioKind::ThermostatLongOn:
    case ScenarioKind::PowerDisruption:
      return s.magnitude_s;
    case ScenarioKind::DoorOpen:
      return p.on_duration_mean_s + 4.0 * s.magnitude_s;
  }
  return s.magnitude_s;
}

void validate_scenarios(std::vector<AnomalyScenario>& scenarios,
                        const ApplianceProfile& profile,
                        EpochSeconds duration_s) {
  std::stable_sort(scenarios.begin(), scenarios.end(),
                   [](const auto& a, const auto& b) { return a.start_s < b.start_s; });
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    if (s.start_s < 0 || s.start_s >= duration_s) {
      throw InvalidScenario(std::string(to_string(s.kind)) + " starts at " +
                            std::to_string(s.start_s) + ", outside the trace");
    }
    if (!(s.magnitude_s > 0.0) || !std::isfinite(s.magnitude_s)) {
      throw InvalidScenario("scenario magnitude must be positive");
    }
    if (i + 1 < scenarios.size()) {
      const auto& next = scenarios[i + 1];
      if (static_cast<double>(s.start_s) + nominal_extent(s, profile) >
          static_cast<double>(next.start_s)) {
        throw InvalidScenario(std::string(to_string(s.kind)) + " at " +
                              std::to_string(s.start_s) + " overlaps " +
                              std::string(to_string(next.kind)) + " at " +
                              std::to_string(next.start_s));
      }
    }
  }
}

}  // namespace

void ApplianceProfile::validate() const {
  const bool ok =
      off_rms_min_amps > 0.0 && off_rms_min_amps <= off_rms_amps &&
      off_rms_amps <= off_rms_max_amps && off_rms_max_amps < on_rms_min_amps &&
      on_rms_min_amps <= on_rms_max_amps && on_duration_mean_s > 0.0 &&
      off_duration_mean_s > 0.0 && on_duration_jitter >= 0.0 &&
      on_duration_jitter < 1.0 && off_duration_jitter >= 0.0 &&
      off_duration_jitter < 1.0 && rms_noise_amps >= 0.0 &&
      record_interval_s > 0 && std::isfinite(on_rms_max_amps) &&
      std::isfinite(on_duration_mean_s) && std::isfinite(off_duration_mean_s) &&
      std::isfinite(rms_noise_amps);
  if (!ok) {
    throw InvalidInput("appliance profile out of range");
  }
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ThermostatLongOn:
      return "thermostat_long_on";
    case ScenarioKind::DoorOpen:
      return "door_open";
    case ScenarioKind::PowerDisruption:
      return "power_disruption";
  }
  return "thermostat_long_on";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view text) {
  if (text == "thermostat_long_on") return ScenarioKind::ThermostatLongOn;
  if (text == "door_open") return ScenarioKind::DoorOpen;
  if (text == "power_disruption") return ScenarioKind::PowerDisruption;
  return std::nullopt;
}

Trace generate_trace(const ApplianceProfile& profile,
                     std::vector<AnomalyScenario> scenarios,
                     EpochSeconds duration_s, std::uint64_t seed) {
  profile.validate();
  if (duration_s <= 0) {
    throw InvalidInput("trace duration must be positive");
  }
  validate_scenarios(scenarios, profile, duration_s);

  Rng rng(seed);
  const EpochSeconds dt = profile.record_interval_s;
  const std::int64_t n_total = duration_s / dt;
  auto stamp = [&](std::int64_t i) { return profile.start_epoch_s + i * dt; };
  // Gaussian noise truncated to the band by redrawing; clamping would pile
  // values on the band edge and shrink the cycle's spread.
  auto noisy = [&](double center, double lo, double hi) {
    for (int tries = 0; tries < 64; ++tries) {
      const double x = center + profile.rms_noise_amps * rng.gaussian();
      if (x >= lo && x <= hi) return quantize_amps(x);
    }
    return quantize_amps(std::clamp(center, lo, hi));
  };

  Trace trace;
  trace.records.reserve(static_cast<std::size_t>(n_total));
  std::size_t next = 0;
  std::int64_t i = 0;
  bool on_phase = true;

  while (i < n_total) {
    const EpochSeconds offset = i * dt;
    const AnomalyScenario* pending =
        next < scenarios.size() && scenarios[next].start_s <= offset
            ? &scenarios[next]
            : nullptr;

    if (on_phase) {
      const double level = on_level(profile, rng);
      std::int64_t n = to_records(
          profile.on_duration_mean_s *
              rng.uniform(1.0 - profile.on_duration_jitter, 1.0 + profile.on_duration_jitter),
          dt);
      if (pending && pending->kind != ScenarioKind::PowerDisruption) {
        if (pending->kind == ScenarioKind::ThermostatLongOn) {
          n = to_records(pending->magnitude_s, dt);
        } else {
          n = to_records(profile.on_duration_mean_s +
                             pending->magnitude_s * rng.uniform(2.0, 4.0),
                         dt);
        }
        // The cycle must end inside the trace so the anomaly is observable.
        if (i + n >= n_total) {
          throw InvalidScenario(std::string(to_string(pending->kind)) +
                                " does not complete before the trace ends");
        }
        trace.labels.push_back({stamp(i), stamp(i + n), pending->kind});
        ++next;
      }
      for (std::int64_t k = 0; k < n && i < n_total; ++k, ++i) {
        const double x = noisy(level, profile.on_rms_min_amps, profile.on_rms_max_amps);
        trace.records.push_back({stamp(i), x});
      }
    } else {
      std::int64_t n = to_records(
          profile.off_duration_mean_s *
              rng.uniform(1.0 - profile.off_duration_jitter, 1.0 + profile.off_duration_jitter),
          dt);
      if (pending && pending->kind == ScenarioKind::PowerDisruption) {
        n = to_records(pending->magnitude_s, dt);
        if (i + n > n_total) {
          throw InvalidScenario("power_disruption does not complete before the trace ends");
        }
        trace.labels.push_back({stamp(i), stamp(i + n), pending->kind});
        ++next;
      }
      for (std::int64_t k = 0; k < n && i < n_total; ++k, ++i) {
        const double x =
            noisy(profile.off_rms_amps, profile.off_rms_min_amps, profile.off_rms_max_amps);
        trace.records.push_back({stamp(i), x});
      }
    }
    on_phase = !on_phase;
  }

  if (next != scenarios.size()) {
    throw InvalidScenario(std::string(to_string(scenarios[next].kind)) +
                          " could not be placed before the trace ends");
  }
  return trace;
}

std::vector<AnomalyScenario> deployment_scenarios() {
  constexpr EpochSeconds day = 24 * 3600;
  return {
      AnomalyScenario::long_on(4 * day),
      AnomalyScenario::door_open(6 * day),
      AnomalyScenario::door_open(8 * day + day / 2),
      AnomalyScenario::power_disruption(11 * day),
  };
}

SampleBlock generate_waveform(double target_rms_amps, std::size_t n_samples,
                              double mains_hz, double sample_rate_hz,
                              double noise_std_amps, std::uint64_t seed) {
  if (n_samples == 0) throw InvalidInput("waveform needs at least one sample");
  if (!(mains_hz > 0.0) || !(sample_rate_hz > 2.0 * mains_hz) ||
      !std::isfinite(sample_rate_hz)) {
    throw InvalidInput("sample rate must exceed twice the mains frequency");
  }
  if (!(target_rms_amps >= 0.0) || !(noise_std_amps >= 0.0) ||
      !std::isfinite(target_rms_amps) || !std::isfinite(noise_std_amps)) {
    throw InvalidInput("target RMS and noise must be finite and non-negative");
  }
  Rng rng(seed);
  const double amplitude = target_rms_amps * std::numbers::sqrt2;
  const double w = 2.0 * std::numbers::pi * mains_hz / sample_rate_hz;
  SampleBlock block;
  block.sample_rate_hz = sample_rate_hz;
  block.samples.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    block.samples[i] = amplitude * std::sin(w * static_cast<double>(i));
    if (noise_std_amps > 0.0) block.samples[i] += noise_std_amps * rng.gaussian();
  }
  return block;
}

void write_labels(std::ostream& out, const std::vector<GroundTruthLabel>& labels) {
  out << kLabelsHeader << '\n';
  for (const auto& l : labels) {
    out << l.window_start_s << ',' << l.window_end_s << ',' << to_string(l.kind) << '\n';
  }
}

std::vector<GroundTruthLabel> parse_labels(std::istream& in) {
  std::vector<GroundTruthLabel> labels;
  csv::for_each_row(in, kLabelsHeader, [&](std::string_view line, std::size_t no) {
    const auto fields = csv::split(line);
    if (fields.size() != 3) {
      throw ParseError(no, 0, "expected 3 columns, found " + std::to_string(fields.size()));
    }
    GroundTruthLabel l;
    l.window_start_s = csv::parse_int(fields[0], no, 1);
    l.window_end_s = csv::parse_int(fields[1], no, 2);
    if (l.window_end_s <= l.window_start_s) {
      throw ParseError(no, 2, "label window must have positive length");
    }
    const auto kind = scenario_kind_from_string(fields[2]);
    if (!kind) throw ParseError(no, 3, "unknown scenario kind '" + std::string(fields[2]) + "'");
    l.kind = *kind;
    labels.push_back(l);
  });
  return labels;
}

void write_trace(std::ostream& out, const std::vector<RmsRecord>& records) {
  out << kLogHeader << '\n';
  for (const auto& r : records) {
    out << serialize_record(LogRecord{r.timestamp_s, r.rms_amps, std::nullopt, false,
                                      EventKind::None})
        << '\n';
  }
}

std::vector<RmsRecord> parse_trace(std::istream& in) {
  const auto log = parse_log(in, true);
  std::vector<RmsRecord> records;
  records.reserve(log.size());
  for (const auto& r : log) records.push_back({r.timestamp_s, r.rms_amps});
  return records;
}

}  // namespace zsense
