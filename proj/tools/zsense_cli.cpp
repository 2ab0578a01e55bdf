// zsense: simulate traces, run the detector, score it against ground truth.
//
// Exit codes: 0 success, 1 usage/config error, 2 data/parse error,
// 3 insufficient training.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_config.hpp"
#include "zsense/zsense.hpp"

namespace {

using namespace zsense;
using cli::ConfigError;
using cli::DataError;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> training_cycles;
  std::optional<double> z_threshold;
  std::optional<EpochSeconds> off_limit_s;
  std::optional<double> on_enter_amps;
  std::optional<double> off_enter_amps;
  std::optional<double> sigma_floor;
  std::optional<EpochSeconds> record_interval_s;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--training-cycles", training_cycles, "ON cycles used for training");
    app.add_option("--z-threshold", z_threshold, "composite score cutoff (strict >)");
    app.add_option("--off-limit", off_limit_s, "watchdog OFF limit in seconds");
    app.add_option("--on-enter", on_enter_amps, "RMS above which OFF->ON");
    app.add_option("--off-enter", off_enter_amps, "RMS below which ON->OFF");
    app.add_option("--sigma-floor", sigma_floor, "minimum per-feature sigma");
    app.add_option("--record-interval", record_interval_s, "seconds between RMS records");
  }

  cli::FileConfig resolve() const {
    cli::FileConfig cfg = config_path.empty() ? cli::FileConfig{} : cli::load_config(config_path);
    auto& p = cfg.pipeline;
    if (training_cycles) p.training_cycles = *training_cycles;
    if (z_threshold) p.z_threshold = *z_threshold;
    if (off_limit_s) p.watchdog.off_limit_s = *off_limit_s;
    if (on_enter_amps) p.thresholds.on_enter_amps = *on_enter_amps;
    if (off_enter_amps) p.thresholds.off_enter_amps = *off_enter_amps;
    if (sigma_floor) p.sigma_floor = *sigma_floor;
    if (record_interval_s) p.record_interval_s = *record_interval_s;
    cfg.profile.record_interval_s = p.record_interval_s;
    try {
      p.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    return cfg;
  }
};

template <typename T, typename F>
T parse_stream(const std::string& path, F&& parse) {
  std::istringstream in(cli::read_file(path));
  return parse(in);
}

ModelParams load_model(const std::string& path) {
  return parse_model(cli::read_file(path));
}

std::string log_text(const std::vector<LogRecord>& log) {
  std::ostringstream out;
  write_log(out, log);
  return out.str();
}

std::string events_text(const std::vector<AnomalyEvent>& events) {
  std::ostringstream out;
  write_events(out, events);
  return out.str();
}

int cmd_simulate(const CommonOptions& common, const std::string& out_path,
                 const std::string& labels_path, std::optional<std::uint64_t> seed,
                 std::optional<double> days, const std::string& preset,
                 const std::vector<std::string>& scenario_flags) {
  cli::FileConfig cfg = common.resolve();
  std::vector<AnomalyScenario> scenarios = cfg.scenarios;
  if (preset == "deployment") {
    const auto d = deployment_scenarios();
    scenarios.insert(scenarios.end(), d.begin(), d.end());
  }
  for (const auto& s : scenario_flags) scenarios.push_back(cli::parse_scenario_flag(s));

  EpochSeconds duration = cfg.duration_s.value_or(kFourteenDays);
  if (days) duration = static_cast<EpochSeconds>(*days * 86400.0);
  const std::uint64_t s = seed.value_or(cfg.seed.value_or(1));

  Trace trace;
  try {
    trace = generate_trace(cfg.profile, scenarios, duration, s);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  } catch (const InvalidScenario& e) {
    throw ConfigError(e.what());
  }

  std::ostringstream trace_out;
  write_trace(trace_out, trace.records);
  cli::write_file(out_path, trace_out.str());
  std::ostringstream labels_out;
  write_labels(labels_out, trace.labels);
  cli::write_file(labels_path, labels_out.str());
  std::cout << "records=" << trace.records.size() << "\nlabels=" << trace.labels.size()
            << "\nseed=" << s << "\n";
  return 0;
}

int cmd_run(const CommonOptions& common, const std::string& trace_path,
            const std::string& log_path, const std::string& events_path,
            const std::string& model_path) {
  const cli::FileConfig cfg = common.resolve();
  const auto records = parse_stream<std::vector<RmsRecord>>(trace_path, parse_trace);
  const RunResult run = run_pipeline(cfg.pipeline, records);
  cli::write_file(log_path, log_text(run.log));
  cli::write_file(events_path, events_text(run.events));
  cli::write_file(model_path, serialize_model(run.model));

  std::size_t zscore = 0;
  std::size_t watchdog = 0;
  for (const auto& e : run.events) (e.kind == EventKind::ZScore ? zscore : watchdog)++;
  std::cout << "records=" << run.log.size() << "\ntrained_on=" << run.model.trained_on
            << "\nzscore_events=" << zscore << "\nwatchdog_events=" << watchdog << "\n";
  return 0;
}

int cmd_eval(const std::string& events_path, const std::string& labels_path,
             EpochSeconds grace, const std::string& report_path) {
  const auto events = parse_stream<std::vector<AnomalyEvent>>(events_path, parse_events);
  const auto labels = parse_stream<std::vector<GroundTruthLabel>>(labels_path, parse_labels);
  const EvalReport report = evaluate(events, labels, grace);
  std::cout << format_report_text(report);
  if (!report_path.empty()) cli::write_file(report_path, format_report_kv(report));
  return 0;
}

int cmd_profile(const CommonOptions& common, const std::string& model_path,
                std::size_t trials, std::size_t calls, std::uint64_t seed) {
  const cli::FileConfig cfg = common.resolve();
  ModelParams model;
  if (!model_path.empty()) {
    model = load_model(model_path);
  } else {
    // Enough normal cycles for the requested training length, with slack.
    const double cycle_s = cfg.profile.on_duration_mean_s * (1.0 + cfg.profile.on_duration_jitter) +
                           cfg.profile.off_duration_mean_s * (1.0 + cfg.profile.off_duration_jitter);
    const auto duration = static_cast<EpochSeconds>(
        cycle_s * static_cast<double>(cfg.pipeline.training_cycles + 2));
    const auto trace = generate_trace(cfg.profile, {}, duration, seed);
    model = run_pipeline(cfg.pipeline, trace.records).model;
  }
  const LatencySummary s = profile_latency(model, trials, calls, seed);
  std::printf("trials=%zu\ncalls_per_trial=%zu\n", s.trials, s.calls_per_trial);
  std::printf("min_ns=%.2f\nmedian_ns=%.2f\np99_ns=%.2f\n", s.min_ns, s.median_ns, s.p99_ns);
  std::printf("model_stats=%zu\nmodel_counters=%zu\ntrained_on=%llu\n", s.model_stat_count,
              s.model_counter_count, static_cast<unsigned long long>(model.trained_on));
  std::printf("state_bytes=%zu\n", Pipeline::state_bytes());
  std::printf("note=host wall-clock per score+detect call; not an MCU cycle count\n");
  return 0;
}

int cmd_replay(const CommonOptions& common, const std::string& log_path,
               const std::string& model_path, const std::string& out_path,
               const std::string& events_path) {
  const cli::FileConfig cfg = common.resolve();
  const auto original = parse_stream<std::vector<LogRecord>>(
      log_path, [](std::istream& in) { return parse_log(in, true); });
  std::optional<ModelParams> model;
  if (!model_path.empty()) model = load_model(model_path);
  const RunResult run = run_pipeline(cfg.pipeline, to_rms_records(original), model);

  if (!out_path.empty()) cli::write_file(out_path, log_text(run.log));
  if (!events_path.empty()) cli::write_file(events_path, events_text(run.events));

  std::size_t compared = 0;
  for (const auto& r : original) compared += r.composite_z.has_value();
  const std::size_t mismatches = count_composite_mismatches(original, run.log);
  std::cout << "records=" << original.size() << "\ncompared=" << compared
            << "\nmismatches=" << mismatches << "\n";
  if (mismatches != 0) {
    throw DataError(std::to_string(mismatches) + " composite scores differ from the log");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zsense: streaming z-score anomaly detection on RMS current"};
  app.require_subcommand(1);

  CommonOptions sim_common;
  std::string sim_out;
  std::string sim_labels;
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_days;
  std::string sim_preset = "none";
  std::vector<std::string> sim_scenarios;
  auto* sim = app.add_subcommand("simulate", "synthesize an RMS trace and its labels");
  sim_common.add_to(*sim);
  sim->add_option("--out", sim_out, "trace CSV to write")->required();
  sim->add_option("--labels", sim_labels, "labels CSV to write")->required();
  sim->add_option("--seed", sim_seed, "generator seed (default 1)");
  sim->add_option("--days", sim_days, "trace length in days (default 14)");
  sim->add_option("--preset", sim_preset, "scenario preset")
      ->check(CLI::IsMember({"none", "deployment"}));
  sim->add_option("--scenario", sim_scenarios, "kind@start_s[:magnitude_s], repeatable");

  CommonOptions run_common;
  std::string run_trace;
  std::string run_log;
  std::string run_events;
  std::string run_model;
  auto* run = app.add_subcommand("run", "train and detect over a trace");
  run_common.add_to(*run);
  run->add_option("--trace", run_trace, "input trace CSV")->required();
  run->add_option("--log", run_log, "output log CSV")->required();
  run->add_option("--events", run_events, "output events CSV")->required();
  run->add_option("--model", run_model, "output model file")->required();

  std::string eval_events;
  std::string eval_labels;
  EpochSeconds eval_grace = kDefaultMatchGraceS;
  std::string eval_report;
  auto* ev = app.add_subcommand("eval", "score events against ground-truth labels");
  ev->add_option("--events", eval_events, "events CSV")->required();
  ev->add_option("--labels", eval_labels, "labels CSV")->required();
  ev->add_option("--grace", eval_grace, "match grace in seconds")->capture_default_str();
  ev->add_option("--report", eval_report, "write key=value report here");

  CommonOptions prof_common;
  std::string prof_model;
  std::size_t prof_trials = 2000;
  std::size_t prof_calls = 1000;
  std::uint64_t prof_seed = 1;
  auto* prof = app.add_subcommand("profile", "time score+detect and report model size");
  prof_common.add_to(*prof);
  prof->add_option("--model", prof_model, "model file (default: train on a simulated trace)");
  prof->add_option("--trials", prof_trials, "timed batches")->capture_default_str();
  prof->add_option("--calls", prof_calls, "calls per batch")->capture_default_str();
  prof->add_option("--seed", prof_seed, "seed for queries and training trace");

  CommonOptions rep_common;
  std::string rep_log;
  std::string rep_model;
  std::string rep_out;
  std::string rep_events;
  auto* rep = app.add_subcommand("replay", "re-score an existing log and compare composites");
  rep_common.add_to(*rep);
  rep->add_option("--log", rep_log, "log CSV written by run")->required();
  rep->add_option("--model", rep_model, "score with this model instead of retraining");
  rep->add_option("--out", rep_out, "write the re-scored log here");
  rep->add_option("--events", rep_events, "write the re-scored events here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_common, sim_out, sim_labels, sim_seed, sim_days, sim_preset,
                          sim_scenarios);
    }
    if (run->parsed()) return cmd_run(run_common, run_trace, run_log, run_events, run_model);
    if (ev->parsed()) return cmd_eval(eval_events, eval_labels, eval_grace, eval_report);
    if (prof->parsed()) {
      return cmd_profile(prof_common, prof_model, prof_trials, prof_calls, prof_seed);
    }
    if (rep->parsed()) return cmd_replay(rep_common, rep_log, rep_model, rep_out, rep_events);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InsufficientTraining& e) {
    std::cerr << "insufficient training: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const InvalidScenario& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const StreamOrderError& e) {
    std::cerr << "stream order error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
