#include "zsense/profiling.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <string_view>
#include <vector>

#include "zsense/errors.hpp"

namespace zsense {

LatencySummary profile_latency(const ModelParams& params, std::size_t n_trials,
                               std::size_t calls_per_trial, std::uint64_t seed) {
  if (n_trials == 0 || calls_per_trial == 0) {
    throw InvalidInput("profiling needs at least one trial and one call");
  }
  std::mt19937_64 engine(seed);
  auto unit = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

  // Queries spread over +/-4 sigma so both decisions are exercised.
  std::vector<CycleFeatures> queries(64);
  for (auto& q : queries) {
    std::array<double, kFeatureCount> x{};
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      x[k] = params.mean[k] + (unit() * 8.0 - 4.0) * params.std[k];
    }
    q = CycleFeatures::from_array(x);
  }

  using clock = std::chrono::steady_clock;
  std::vector<double> per_call_ns;
  per_call_ns.reserve(n_trials);
  DetectorState state{};
  volatile double sink = 0.0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    const auto start = clock::now();
    for (std::size_t i = 0; i < calls_per_trial; ++i) {
      const ZScores z = score(params, queries[i % queries.size()]);
      const Detection d = detect(state, z.composite);
      state = d.state;
      sink = sink + z.composite;
    }
    const auto stop = clock::now();
    per_call_ns.push_back(
        std::chrono::duration<double, std::nano>(stop - start).count() /
        static_cast<double>(calls_per_trial));
  }
  std::sort(per_call_ns.begin(), per_call_ns.end());

  LatencySummary s;
  s.trials = n_trials;
  s.calls_per_trial = calls_per_trial;
  s.min_ns = per_call_ns.front();
  s.median_ns = per_call_ns[per_call_ns.size() / 2];
  s.p99_ns = per_call_ns[std::min(per_call_ns.size() - 1, per_call_ns.size() * 99 / 100)];
  const auto fields = count_model_fields(params);
  s.model_stat_count = fields.stats;
  s.model_counter_count = fields.counters;
  return s;
}

ModelFieldCount count_model_fields(const ModelParams& params) {
  const std::string text = serialize_model(params);
  ModelFieldCount c;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = line.substr(0, eq);
    if (key.ends_with(".mean") || key.ends_with(".std")) {
      ++c.stats;
    } else {
      ++c.counters;
    }
  }
  return c;
}

}  // namespace zsense
