#include "cli_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace zsense::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void take(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

FileConfig load_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  reject_unknown(doc, {"pipeline", "profile", "scenarios", "duration_s", "seed"}, "config");

  FileConfig cfg;
  if (doc.contains("pipeline")) {
    const auto& p = doc["pipeline"];
    reject_unknown(p,
                   {"block_size", "record_interval_s", "on_enter_amps", "off_enter_amps",
                    "training_cycles", "z_threshold", "watchdog_off_limit_s",
                    "sigma_floor"},
                   "pipeline");
    auto& c = cfg.pipeline;
    take(p, "block_size", c.block_size);
    take(p, "record_interval_s", c.record_interval_s);
    take(p, "on_enter_amps", c.thresholds.on_enter_amps);
    take(p, "off_enter_amps", c.thresholds.off_enter_amps);
    take(p, "training_cycles", c.training_cycles);
    take(p, "z_threshold", c.z_threshold);
    take(p, "watchdog_off_limit_s", c.watchdog.off_limit_s);
    take(p, "sigma_floor", c.sigma_floor);
  }
  if (doc.contains("profile")) {
    const auto& p = doc["profile"];
    reject_unknown(p,
                   {"on_rms_min_amps", "on_rms_max_amps", "off_rms_amps", "off_rms_min_amps",
                    "off_rms_max_amps", "on_duration_mean_s", "on_duration_jitter",
                    "off_duration_mean_s", "off_duration_jitter", "rms_noise_amps",
                    "start_epoch_s"},
                   "profile");
    auto& a = cfg.profile;
    take(p, "on_rms_min_amps", a.on_rms_min_amps);
    take(p, "on_rms_max_amps", a.on_rms_max_amps);
    take(p, "off_rms_amps", a.off_rms_amps);
    take(p, "off_rms_min_amps", a.off_rms_min_amps);
    take(p, "off_rms_max_amps", a.off_rms_max_amps);
    take(p, "on_duration_mean_s", a.on_duration_mean_s);
    take(p, "on_duration_jitter", a.on_duration_jitter);
    take(p, "off_duration_mean_s", a.off_duration_mean_s);
    take(p, "off_duration_jitter", a.off_duration_jitter);
    take(p, "rms_noise_amps", a.rms_noise_amps);
    take(p, "start_epoch_s", a.start_epoch_s);
  }
  if (doc.contains("scenarios")) {
    if (!doc["scenarios"].is_array()) throw ConfigError("scenarios must be an array");
    for (const auto& s : doc["scenarios"]) {
      reject_unknown(s, {"kind", "start_s", "magnitude_s"}, "scenario");
      std::string kind;
      take(s, "kind", kind);
      const auto k = scenario_kind_from_string(kind);
      if (!k) throw ConfigError("unknown scenario kind '" + kind + "'");
      if (!s.contains("start_s")) throw ConfigError("scenario needs start_s");
      EpochSeconds start = 0;
      take(s, "start_s", start);
      AnomalyScenario sc = AnomalyScenario::make(*k, start);
      take(s, "magnitude_s", sc.magnitude_s);
      cfg.scenarios.push_back(sc);
    }
  }
  if (doc.contains("duration_s")) {
    EpochSeconds d = 0;
    take(doc, "duration_s", d);
    cfg.duration_s = d;
  }
  if (doc.contains("seed")) {
    std::uint64_t s = 0;
    take(doc, "seed", s);
    cfg.seed = s;
  }
  return cfg;
}

AnomalyScenario parse_scenario_flag(const std::string& text) {
  const auto at = text.find('@');
  if (at == std::string::npos) {
    throw ConfigError("scenario '" + text + "' must look like kind@start_s[:magnitude_s]");
  }
  const auto kind = scenario_kind_from_string(text.substr(0, at));
  if (!kind) throw ConfigError("unknown scenario kind in '" + text + "'");
  const std::string rest = text.substr(at + 1);
  const auto colon = rest.find(':');
  AnomalyScenario sc;
  try {
    std::size_t used = 0;
    const std::string start = rest.substr(0, colon);
    sc = AnomalyScenario::make(*kind, std::stoll(start, &used));
    if (used != start.size()) throw std::invalid_argument(start);
    if (colon != std::string::npos) {
      const std::string mag = rest.substr(colon + 1);
      sc.magnitude_s = std::stod(mag, &used);
      if (used != mag.size()) throw std::invalid_argument(mag);
    }
  } catch (const std::logic_error&) {
    throw ConfigError("bad number in scenario '" + text + "'");
  }
  return sc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace zsense::cli
