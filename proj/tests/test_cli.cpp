#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "cli_config.hpp"

namespace fs = std::filesystem;
using namespace zsense;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("zsense_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ZSENSE_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("scenario flag syntax") {
  const auto a = cli::parse_scenario_flag("door_open@518400");
  CHECK(a.kind == ScenarioKind::DoorOpen);
  CHECK(a.start_s == 518400);
  CHECK(a.magnitude_s == doctest::Approx(900.0));

  const auto b = cli::parse_scenario_flag("power_disruption@100:5400");
  CHECK(b.kind == ScenarioKind::PowerDisruption);
  CHECK(b.magnitude_s == doctest::Approx(5400.0));

  CHECK_THROWS_AS(cli::parse_scenario_flag("door_open"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_scenario_flag("fire@10"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_scenario_flag("door_open@1x"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_scenario_flag("door_open@1:"), cli::ConfigError);
}

TEST_CASE("config file") {
  Scratch s;
  const auto good = s.write("good.json", R"({
    "pipeline": {"training_cycles": 20, "z_threshold": 3.0, "watchdog_off_limit_s": 1800},
    "profile": {"rms_noise_amps": 0.001},
    "scenarios": [{"kind": "thermostat_long_on", "start_s": 345600}],
    "seed": 9
  })");
  const auto cfg = cli::load_config(good.string());
  CHECK(cfg.pipeline.training_cycles == 20);
  CHECK(cfg.pipeline.z_threshold == 3.0);
  CHECK(cfg.pipeline.watchdog.off_limit_s == 1800);
  CHECK(cfg.profile.rms_noise_amps == 0.001);
  REQUIRE(cfg.scenarios.size() == 1);
  CHECK(cfg.scenarios[0].magnitude_s == doctest::Approx(18000.0));
  CHECK(cfg.seed == 9u);
  CHECK_FALSE(cfg.duration_s.has_value());

  CHECK_THROWS_AS(cli::load_config(s.write("a.json", R"({"pipline": {}})").string()), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(s.write("b.json", R"({"pipeline": {"z": 1}})").string()),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(s.write("c.json", R"({"seed": "x"})").string()), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config(s.write("d.json", "{").string()), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config((s.dir / "missing.json").string()), cli::DataError);
}

TEST_CASE("exit codes") {
  Scratch s;
  const std::string d = "\"" + s.dir.string() + "/";
  const std::string trace = d + "t.csv\"";
  const std::string labels = d + "l.csv\"";
  const std::string outs = " --log " + d + "log.csv\" --events " + d + "ev.csv\" --model " + d + "m.txt\"";

  CHECK(run_cli("") == 1);
  CHECK(run_cli("simulate --out " + trace) == 1);
  CHECK(run_cli("simulate --out " + trace + " --labels " + labels + " --scenario fire@10") == 1);
  CHECK(run_cli("simulate --out " + trace + " --labels " + labels +
            " --scenario door_open@100 --scenario door_open@200") == 1);

  CHECK(run_cli("simulate --days 1 --out " + trace + " --labels " + labels) == 0);
  CHECK(run_cli("run --trace " + trace + outs) == 3);
  CHECK(run_cli("run --trace " + trace + outs + " --z-threshold -1") == 1);

  const auto bad = s.write("bad.csv", "timestamp,rms,zscore,flag,kind\n1,0.5,,0,none\n1,0.5,,0,none\n");
  CHECK(run_cli("run --trace \"" + bad.string() + "\"" + outs) == 2);
  const auto garbled = s.write("garbled.csv", "timestamp,rms,zscore,flag,kind\n1,zz,,0,none\n");
  CHECK(run_cli("run --trace \"" + garbled.string() + "\"" + outs) == 2);
  CHECK(run_cli("eval --events " + d + "nope.csv\" --labels " + labels) == 2);

  CHECK(run_cli("simulate --days 5 --out " + trace + " --labels " + labels) == 0);
  CHECK(run_cli("run --trace " + trace + outs) == 0);
  CHECK(run_cli("eval --events " + d + "ev.csv\" --labels " + labels + " --report " + d + "r.txt\"") == 0);
  CHECK(run_cli("replay --log " + d + "log.csv\" --model " + d + "m.txt\"") == 0);
  CHECK(run_cli("profile --trials 20 --calls 50 --model " + d + "m.txt\"") == 0);

  // A hand-edited composite must be caught by replay.
  std::ifstream in(s.dir / "log.csv");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto pos = text.find(",0,none", text.rfind(",,0,none") + 1);
  REQUIRE(pos != std::string::npos);
  const auto comma = text.rfind(',', pos - 1);
  text.replace(comma + 1, pos - comma - 1, "99.0000");
  s.write("tampered.csv", text);
  CHECK(run_cli("replay --log " + d + "tampered.csv\" --model " + d + "m.txt\"") == 2);
}
