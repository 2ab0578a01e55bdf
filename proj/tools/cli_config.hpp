#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zsense/pipeline.hpp"
#include "zsense/simulator.hpp"

namespace zsense::cli {

// Bad configuration or usage; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data or parse failure outside the library's own error types (missing
// file, replay mismatch); maps to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileConfig {
  PipelineConfig pipeline;
  ApplianceProfile profile;
  std::vector<AnomalyScenario> scenarios;
  std::optional<EpochSeconds> duration_s;
  std::optional<std::uint64_t> seed;
};

// JSON document with optional "pipeline", "profile", "scenarios",
// "duration_s" and "seed" members. Unknown keys are rejected.
FileConfig load_config(const std::string& path);

// "kind@start_s" or "kind@start_s:magnitude_s", kind as in the labels file.
AnomalyScenario parse_scenario_flag(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace zsense::cli
