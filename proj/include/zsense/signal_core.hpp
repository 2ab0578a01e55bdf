#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zsense {

using EpochSeconds = std::int64_t;

inline constexpr std::size_t kDefaultBlockSize = 1000;

// Linear Hall-effect sensor behind an N-bit ADC. Defaults model a 12-bit
// converter on a 3.3 V rail with a bipolar sensor biased at mid-rail.
struct AdcParams {
  std::int32_t resolution_counts = 4095;
  double vref_volts = 3.3;
  double midrail_volts = 1.65;
  double sensitivity_volts_per_amp = 0.1;

  // Throws InvalidInput when the parameter set is unusable.
  void validate() const;
};

// One acquisition window of instantaneous current, in amperes.
struct SampleBlock {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;

  // Checks finiteness, a positive rate and (when expected_size != 0) the
  // block length.
  void validate(std::size_t expected_size = kDefaultBlockSize) const;
};

struct RmsRecord {
  EpochSeconds timestamp_s = 0;
  double rms_amps = 0.0;

  friend bool operator==(const RmsRecord&, const RmsRecord&) = default;
};

// sqrt(sum(x^2) / N), accumulated left to right in double precision.
double compute_rms(std::span<const double> samples);
double compute_rms(const SampleBlock& block);

double adc_to_amps(std::int32_t count, const AdcParams& params);

// Converts a block of raw counts; every count is range-checked.
std::vector<double> adc_to_amps(std::span<const std::int32_t> counts,
                                const AdcParams& params);

}  // namespace zsense
