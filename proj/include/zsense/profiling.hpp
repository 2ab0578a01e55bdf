#pragma once

#include <cstddef>
#include <cstdint>

#include "zsense/zscore_model.hpp"

namespace zsense {

// Host wall-clock timing of score() followed by detect(). Each trial times a
// batch of calls and records the per-call average, which keeps the clock's
// own resolution out of the figures. Host numbers say nothing about MCU
// cycle counts; only their shape (tiny, flat in training size) carries over.
struct LatencySummary {
  std::size_t trials = 0;
  std::size_t calls_per_trial = 0;
  double min_ns = 0.0;
  double median_ns = 0.0;
  double p99_ns = 0.0;
  std::size_t model_stat_count = 0;  // values in the serialized model
  std::size_t model_counter_count = 0;
};

LatencySummary profile_latency(const ModelParams& params, std::size_t n_trials,
                               std::size_t calls_per_trial = 1000,
                               std::uint64_t seed = 1);

// Number of numeric statistics and counters in a serialized model block.
struct ModelFieldCount {
  std::size_t stats = 0;
  std::size_t counters = 0;
};
ModelFieldCount count_model_fields(const ModelParams& params);

}  // namespace zsense
