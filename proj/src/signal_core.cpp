#include "zsense/signal_core.hpp"

#include <cmath>
#include <string>

#include "zsense/errors.hpp"

namespace zsense {

void AdcParams::validate() const {
  if (resolution_counts <= 0) {
    throw InvalidInput("ADC resolution must be positive");
  }
  if (!(sensitivity_volts_per_amp > 0.0) ||
      !std::isfinite(sensitivity_volts_per_amp)) {
    throw InvalidInput("sensor sensitivity must be positive");
  }
  if (!std::isfinite(vref_volts) || !std::isfinite(midrail_volts) ||
      midrail_volts < 0.0 || midrail_volts > vref_volts) {
    throw InvalidInput("mid-rail voltage must lie in [0, vref]");
  }
}

void SampleBlock::validate(std::size_t expected_size) const {
  if (samples.empty()) {
    throw InvalidInput("sample block is empty");
  }
  if (expected_size != 0 && samples.size() != expected_size) {
    throw InvalidInput("sample block has " + std::to_string(samples.size()) +
                       " samples, expected " + std::to_string(expected_size));
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw InvalidInput("sample rate must be positive");
  }
  for (double x : samples) {
    if (!std::isfinite(x)) {
      throw InvalidInput("sample block contains a non-finite value");
    }
  }
}

double compute_rms(std::span<const double> samples) {
  if (samples.empty()) {
    throw InvalidInput("cannot compute RMS of an empty block");
  }
  double sum_sq = 0.0;
  for (double x : samples) {
    sum_sq += x * x;
  }
  return std::sqrt(sum_sq / static_cast<double>(samples.size()));
}

double compute_rms(const SampleBlock& block) {
  block.validate(0);
  return compute_rms(std::span<const double>(block.samples));
}

double adc_to_amps(std::int32_t count, const AdcParams& params) {
  if (count < 0 || count > params.resolution_counts) {
    throw InvalidInput("ADC count " + std::to_string(count) +
                       " outside [0, " +
                       std::to_string(params.resolution_counts) + "]");
  }
  const double volts = static_cast<double>(count) /
                       static_cast<double>(params.resolution_counts) *
                       params.vref_volts;
  return (volts - params.midrail_volts) / params.sensitivity_volts_per_amp;
}

std::vector<double> adc_to_amps(std::span<const std::int32_t> counts,
                                const AdcParams& params) {
  params.validate();
  std::vector<double> amps;
  amps.reserve(counts.size());
  for (std::int32_t c : counts) {
    amps.push_back(adc_to_amps(c, params));
  }
  return amps;
}

}  // namespace zsense
