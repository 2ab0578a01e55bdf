#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "zsense/cycle_tracker.hpp"

namespace zsense {

inline constexpr double kDefaultSigmaFloor = 1e-6;
inline constexpr double kDefaultZThreshold = 2.5;

// Running per-feature statistics (Welford). Fixed size: it never stores the
// training sequence.
struct FeatureStats {
  std::uint64_t count = 0;
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> m2{};

  friend bool operator==(const FeatureStats&, const FeatureStats&) = default;
};

// The ten learned statistics plus the number of cycles they came from.
struct ModelParams {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> std{};
  std::uint64_t trained_on = 0;

  static constexpr std::size_t kStatCount = 2 * kFeatureCount;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct ZScores {
  std::array<double, kFeatureCount> z{};
  double composite = 0.0;
};

struct DetectorState {
  double threshold = kDefaultZThreshold;
  std::uint32_t streak = 0;
};

struct Detection {
  bool is_anomaly = false;
  DetectorState state;
};

// Throws InvalidInput on a non-finite feature; stats are left untouched.
FeatureStats train_update(const FeatureStats& stats,
                          const CycleFeatures& features);

// Population sigma (divide by count), floored at sigma_floor.
// Throws InsufficientTraining when fewer than two cycles were seen.
ModelParams finalize(const FeatureStats& stats,
                     double sigma_floor = kDefaultSigmaFloor);

// Per-feature z = (x - mean) / std and their equally weighted mean |z|.
ZScores score(const ModelParams& params, const CycleFeatures& features);

// Strict comparison: a composite equal to the threshold is normal.
Detection detect(DetectorState state, double composite);

// Plain-text "key=value" block, one entry per line:
//   trained_on=<n>
//   <feature>.mean=<v>
//   <feature>.std=<v>
// Values are written with round-trip precision.
std::string serialize_model(const ModelParams& params);

// Throws ParseError on unknown/missing/duplicate keys or bad numbers.
ModelParams parse_model(std::string_view text);

}  // namespace zsense
