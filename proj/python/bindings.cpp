#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zsense/zsense.hpp"

namespace py = pybind11;
using namespace zsense;

namespace {

template <typename T>
std::string to_csv(void (*write)(std::ostream&, const std::vector<T>&), const std::vector<T>& v) {
  std::ostringstream out;
  write(out, v);
  return out.str();
}

template <typename T>
std::vector<T> from_csv(std::vector<T> (*parse)(std::istream&), const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Streaming z-score anomaly detection on appliance RMS current";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", error);
  py::register_exception<StreamOrderError>(m, "StreamOrderError", error);
  py::register_exception<InsufficientTraining>(m, "InsufficientTraining", error);
  py::register_exception<InvalidScenario>(m, "InvalidScenario", error);
  py::register_exception<ParseError>(m, "ParseError", error);

  m.attr("FEATURE_NAMES") = py::cast(std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end()));

  // signal_core
  py::class_<AdcParams>(m, "AdcParams")
      .def(py::init<>())
      .def_readwrite("resolution_counts", &AdcParams::resolution_counts)
      .def_readwrite("vref_volts", &AdcParams::vref_volts)
      .def_readwrite("midrail_volts", &AdcParams::midrail_volts)
      .def_readwrite("sensitivity_volts_per_amp", &AdcParams::sensitivity_volts_per_amp);

  py::class_<RmsRecord>(m, "RmsRecord")
      .def(py::init<>())
      .def(py::init([](EpochSeconds t, double rms) { return RmsRecord{t, rms}; }),
           py::arg("timestamp_s"), py::arg("rms_amps"))
      .def_readwrite("timestamp_s", &RmsRecord::timestamp_s)
      .def_readwrite("rms_amps", &RmsRecord::rms_amps)
      .def(py::self == py::self)
      .def("__repr__", [](const RmsRecord& r) {
        return "RmsRecord(" + std::to_string(r.timestamp_s) + ", " + std::to_string(r.rms_amps) + ")";
      });

  m.def("compute_rms", [](const std::vector<double>& x) { return compute_rms(x); },
        py::arg("samples"));
  m.def("adc_to_amps",
        [](const std::vector<std::int32_t>& counts, const AdcParams& p) { return adc_to_amps(counts, p); },
        py::arg("counts"), py::arg("params") = AdcParams{});

  // features and model
  py::class_<CycleFeatures>(m, "CycleFeatures")
      .def(py::init<>())
      .def(py::init([](const std::array<double, kFeatureCount>& v) { return CycleFeatures::from_array(v); }),
           py::arg("values"))
      .def_readwrite("rms_last_amps", &CycleFeatures::rms_last_amps)
      .def_readwrite("rms_mean_amps", &CycleFeatures::rms_mean_amps)
      .def_readwrite("rms_std_amps", &CycleFeatures::rms_std_amps)
      .def_readwrite("rms_slope_amps_per_s", &CycleFeatures::rms_slope_amps_per_s)
      .def_readwrite("duration_on_s", &CycleFeatures::duration_on_s)
      .def("to_list", &CycleFeatures::to_array);

  py::class_<FeatureStats>(m, "FeatureStats")
      .def(py::init<>())
      .def_readonly("count", &FeatureStats::count)
      .def_readonly("mean", &FeatureStats::mean)
      .def_readonly("m2", &FeatureStats::m2);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("mean", &ModelParams::mean)
      .def_readwrite("std", &ModelParams::std)
      .def_readwrite("trained_on", &ModelParams::trained_on)
      .def(py::self == py::self);

  py::class_<ZScores>(m, "ZScores")
      .def_readonly("z", &ZScores::z)
      .def_readonly("composite", &ZScores::composite);

  py::class_<DetectorState>(m, "DetectorState")
      .def(py::init<>())
      .def_readwrite("threshold", &DetectorState::threshold)
      .def_readwrite("streak", &DetectorState::streak);

  py::class_<Detection>(m, "Detection")
      .def_readonly("is_anomaly", &Detection::is_anomaly)
      .def_readonly("state", &Detection::state);

  m.def("train_update", &train_update, py::arg("stats"), py::arg("features"));
  m.def("finalize", &finalize, py::arg("stats"), py::arg("sigma_floor") = kDefaultSigmaFloor);
  m.def("score", &score, py::arg("params"), py::arg("features"));
  m.def("detect", &detect, py::arg("state"), py::arg("composite"));
  m.def("serialize_model", &serialize_model, py::arg("params"));
  m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

  // logs and events
  py::enum_<EventKind>(m, "EventKind")
      .value("NONE", EventKind::None)
      .value("ZSCORE", EventKind::ZScore)
      .value("WATCHDOG", EventKind::Watchdog);

  py::class_<LogRecord>(m, "LogRecord")
      .def(py::init<>())
      .def_readwrite("timestamp_s", &LogRecord::timestamp_s)
      .def_readwrite("rms_amps", &LogRecord::rms_amps)
      .def_readwrite("composite_z", &LogRecord::composite_z)
      .def_readwrite("anomaly_flag", &LogRecord::anomaly_flag)
      .def_readwrite("event_kind", &LogRecord::event_kind)
      .def(py::self == py::self);

  py::class_<AnomalyEvent>(m, "AnomalyEvent")
      .def(py::init<>())
      .def_readwrite("kind", &AnomalyEvent::kind)
      .def_readwrite("detected_at_s", &AnomalyEvent::detected_at_s)
      .def_readwrite("composite", &AnomalyEvent::composite)
      .def_readwrite("streak", &AnomalyEvent::streak)
      .def_readwrite("cycle_start_s", &AnomalyEvent::cycle_start_s)
      .def_readwrite("cycle_end_s", &AnomalyEvent::cycle_end_s)
      .def(py::self == py::self);

  m.def("serialize_record", &serialize_record, py::arg("record"));
  m.def("parse_record", [](const std::string& line) { return parse_record(line); }, py::arg("line"));
  m.def("write_log", [](const std::vector<LogRecord>& v) { return to_csv(&write_log, v); },
        py::arg("records"));
  m.def("parse_log",
        [](const std::string& text, bool strict) {
          std::istringstream in(text);
          return parse_log(in, strict);
        },
        py::arg("text"), py::arg("strict") = true);
  m.def("write_events", [](const std::vector<AnomalyEvent>& v) { return to_csv(&write_events, v); },
        py::arg("events"));
  m.def("parse_events", [](const std::string& text) { return from_csv(&parse_events, text); },
        py::arg("text"));

  // pipeline
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("block_size", &PipelineConfig::block_size)
      .def_readwrite("record_interval_s", &PipelineConfig::record_interval_s)
      .def_property(
          "on_enter_amps", [](const PipelineConfig& c) { return c.thresholds.on_enter_amps; },
          [](PipelineConfig& c, double v) { c.thresholds.on_enter_amps = v; })
      .def_property(
          "off_enter_amps", [](const PipelineConfig& c) { return c.thresholds.off_enter_amps; },
          [](PipelineConfig& c, double v) { c.thresholds.off_enter_amps = v; })
      .def_readwrite("training_cycles", &PipelineConfig::training_cycles)
      .def_readwrite("z_threshold", &PipelineConfig::z_threshold)
      .def_property(
          "watchdog_off_limit_s", [](const PipelineConfig& c) { return c.watchdog.off_limit_s; },
          [](PipelineConfig& c, EpochSeconds v) { c.watchdog.off_limit_s = v; })
      .def_readwrite("sigma_floor", &PipelineConfig::sigma_floor)
      .def("validate", &PipelineConfig::validate);

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("log", &StepResult::log)
      .def_readonly("event", &StepResult::event);

  py::class_<Pipeline>(m, "Pipeline")
      .def(py::init<PipelineConfig>(), py::arg("config") = PipelineConfig{})
      .def(py::init<PipelineConfig, ModelParams>(), py::arg("config"), py::arg("model"))
      .def("step", &Pipeline::step, py::arg("record"))
      .def_property_readonly("trained", [](const Pipeline& p) { return p.phase() == Phase::Inference; })
      .def_property_readonly("model", &Pipeline::model)
      .def_property_readonly("training_stats", &Pipeline::training_stats)
      .def_property_readonly("detector", &Pipeline::detector)
      .def_property_readonly_static("state_bytes", [](py::object) { return Pipeline::state_bytes(); });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("log", &RunResult::log)
      .def_readonly("events", &RunResult::events)
      .def_readonly("model", &RunResult::model);

  m.def("run_pipeline", &run_pipeline, py::arg("config"), py::arg("records"),
        py::arg("model") = std::nullopt);

  // simulator
  py::class_<ApplianceProfile>(m, "ApplianceProfile")
      .def(py::init<>())
      .def_readwrite("on_rms_min_amps", &ApplianceProfile::on_rms_min_amps)
      .def_readwrite("on_rms_max_amps", &ApplianceProfile::on_rms_max_amps)
      .def_readwrite("off_rms_amps", &ApplianceProfile::off_rms_amps)
      .def_readwrite("off_rms_min_amps", &ApplianceProfile::off_rms_min_amps)
      .def_readwrite("off_rms_max_amps", &ApplianceProfile::off_rms_max_amps)
      .def_readwrite("on_duration_mean_s", &ApplianceProfile::on_duration_mean_s)
      .def_readwrite("on_duration_jitter", &ApplianceProfile::on_duration_jitter)
      .def_readwrite("off_duration_mean_s", &ApplianceProfile::off_duration_mean_s)
      .def_readwrite("off_duration_jitter", &ApplianceProfile::off_duration_jitter)
      .def_readwrite("rms_noise_amps", &ApplianceProfile::rms_noise_amps)
      .def_readwrite("record_interval_s", &ApplianceProfile::record_interval_s)
      .def_readwrite("start_epoch_s", &ApplianceProfile::start_epoch_s);

  py::enum_<ScenarioKind>(m, "ScenarioKind")
      .value("THERMOSTAT_LONG_ON", ScenarioKind::ThermostatLongOn)
      .value("DOOR_OPEN", ScenarioKind::DoorOpen)
      .value("POWER_DISRUPTION", ScenarioKind::PowerDisruption);

  py::class_<AnomalyScenario>(m, "AnomalyScenario")
      .def(py::init([](ScenarioKind kind, EpochSeconds start_s, std::optional<double> magnitude_s) {
             AnomalyScenario s = AnomalyScenario::make(kind, start_s);
             if (magnitude_s) s.magnitude_s = *magnitude_s;
             return s;
           }),
           py::arg("kind"), py::arg("start_s"), py::arg("magnitude_s") = std::nullopt)
      .def_readwrite("kind", &AnomalyScenario::kind)
      .def_readwrite("start_s", &AnomalyScenario::start_s)
      .def_readwrite("magnitude_s", &AnomalyScenario::magnitude_s);

  py::class_<GroundTruthLabel>(m, "GroundTruthLabel")
      .def(py::init<>())
      .def_readwrite("window_start_s", &GroundTruthLabel::window_start_s)
      .def_readwrite("window_end_s", &GroundTruthLabel::window_end_s)
      .def_readwrite("kind", &GroundTruthLabel::kind)
      .def(py::self == py::self);

  py::class_<Trace>(m, "Trace")
      .def_readonly("records", &Trace::records)
      .def_readonly("labels", &Trace::labels);

  m.attr("FOURTEEN_DAYS") = kFourteenDays;
  m.def("generate_trace", &generate_trace, py::arg("profile"), py::arg("scenarios"),
        py::arg("duration_s"), py::arg("seed"));
  m.def("deployment_scenarios", &deployment_scenarios);
  m.def("write_labels", [](const std::vector<GroundTruthLabel>& v) { return to_csv(&write_labels, v); },
        py::arg("labels"));
  m.def("parse_labels", [](const std::string& text) { return from_csv(&parse_labels, text); },
        py::arg("text"));
  m.def("write_trace", [](const std::vector<RmsRecord>& v) { return to_csv(&write_trace, v); },
        py::arg("records"));
  m.def("parse_trace", [](const std::string& text) { return from_csv(&parse_trace, text); },
        py::arg("text"));

  // evaluation and profiling
  py::class_<MatchedDetection>(m, "MatchedDetection")
      .def_readonly("label", &MatchedDetection::label)
      .def_readonly("event", &MatchedDetection::event)
      .def_readonly("delay_s", &MatchedDetection::delay_s);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("true_positives", &EvalReport::true_positives)
      .def_readonly("false_positives", &EvalReport::false_positives)
      .def_readonly("false_negatives", &EvalReport::false_negatives)
      .def_readonly("precision", &EvalReport::precision)
      .def_readonly("recall", &EvalReport::recall)
      .def_readonly("f1", &EvalReport::f1)
      .def_readonly("matches", &EvalReport::matches)
      .def_readonly("unmatched_events", &EvalReport::unmatched_events)
      .def_readonly("missed_labels", &EvalReport::missed_labels)
      .def("to_text", &format_report_text)
      .def("to_kv", &format_report_kv);

  m.def("evaluate", &evaluate, py::arg("events"), py::arg("labels"),
        py::arg("match_grace_s") = kDefaultMatchGraceS);

  py::class_<LatencySummary>(m, "LatencySummary")
      .def_readonly("trials", &LatencySummary::trials)
      .def_readonly("calls_per_trial", &LatencySummary::calls_per_trial)
      .def_readonly("min_ns", &LatencySummary::min_ns)
      .def_readonly("median_ns", &LatencySummary::median_ns)
      .def_readonly("p99_ns", &LatencySummary::p99_ns)
      .def_readonly("model_stat_count", &LatencySummary::model_stat_count)
      .def_readonly("model_counter_count", &LatencySummary::model_counter_count);

  m.def("profile_latency", &profile_latency, py::arg("params"), py::arg("n_trials"),
        py::arg("calls_per_trial") = 1000, py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());
}
