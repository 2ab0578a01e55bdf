#include "zsense/zscore_model.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "zsense/errors.hpp"

namespace zsense {

FeatureStats train_update(const FeatureStats& stats,
                          const CycleFeatures& features) {
  const auto x = features.to_array();
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw InvalidInput("training feature is not finite");
    }
  }
  FeatureStats next = stats;
  ++next.count;
  const double n = static_cast<double>(next.count);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const double delta = x[k] - next.mean[k];
    next.mean[k] += delta / n;
    next.m2[k] += delta * (x[k] - next.mean[k]);
  }
  return next;
}

ModelParams finalize(const FeatureStats& stats, double sigma_floor) {
  if (stats.count < 2) {
    throw InsufficientTraining("need at least 2 training cycles, have " +
                               std::to_string(stats.count));
  }
  ModelParams params;
  params.trained_on = stats.count;
  const double n = static_cast<double>(stats.count);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    params.mean[k] = stats.mean[k];
    params.std[k] = std::max(std::sqrt(stats.m2[k] / n), sigma_floor);
  }
  return params;
}

ZScores score(const ModelParams& params, const CycleFeatures& features) {
  const auto x = features.to_array();
  ZScores out;
  double sum_abs = 0.0;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    out.z[k] = (x[k] - params.mean[k]) / params.std[k];
    sum_abs += std::abs(out.z[k]);
  }
  out.composite = sum_abs / static_cast<double>(kFeatureCount);
  return out;
}

Detection detect(DetectorState state, double composite) {
  Detection d;
  d.is_anomaly = composite > state.threshold;
  state.streak = d.is_anomaly ? state.streak + 1 : 0;
  d.state = state;
  return d;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string serialize_model(const ModelParams& params) {
  std::string out = "trained_on=" + std::to_string(params.trained_on) + "\n";
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    const std::string name(kFeatureNames[k]);
    out += name + ".mean=" + format_double(params.mean[k]) + "\n";
    out += name + ".std=" + format_double(params.std[k]) + "\n";
  }
  return out;
}

ModelParams parse_model(std::string_view text) {
  ModelParams params;
  std::optional<std::uint64_t> trained_on;
  std::array<std::optional<double>, kFeatureCount> means;
  std::array<std::optional<double>, kFeatureCount> stds;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, 0, "expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "trained_on") {
      std::uint64_t n = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), n);
      if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ParseError(line_no, 0, "bad cycle count");
      }
      if (trained_on) throw ParseError(line_no, 0, "duplicate trained_on");
      trained_on = n;
      continue;
    }

    const auto dot = key.rfind('.');
    std::optional<std::size_t> feature;
    if (dot != std::string_view::npos) {
      for (std::size_t k = 0; k < kFeatureCount; ++k) {
        if (key.substr(0, dot) == kFeatureNames[k]) feature = k;
      }
    }
    const std::string_view field =
        dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1);
    if (!feature || (field != "mean" && field != "std")) {
      throw ParseError(line_no, 0, "unknown key '" + std::string(key) + "'");
    }
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
        !std::isfinite(v)) {
      throw ParseError(line_no, 0, "bad number for '" + std::string(key) + "'");
    }
    auto& slot = field == "mean" ? means[*feature] : stds[*feature];
    if (slot) throw ParseError(line_no, 0, "duplicate key '" + std::string(key) + "'");
    if (field == "std" && !(v > 0.0)) {
      throw ParseError(line_no, 0, "std must be positive");
    }
    slot = v;
  }

  if (!trained_on) throw ParseError(line_no, 0, "missing trained_on");
  params.trained_on = *trained_on;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    if (!means[k] || !stds[k]) {
      throw ParseError(line_no, 0,
                       "missing statistics for " + std::string(kFeatureNames[k]));
    }
    params.mean[k] = *means[k];
    params.std[k] = *stds[k];
  }
  return params;
}

}  // namespace zsense
