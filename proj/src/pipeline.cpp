#include "zsense/pipeline.hpp"

#include <cmath>
#include <string>

#include "zsense/errors.hpp"

namespace zsense {

void PipelineConfig::validate() const {
  if (block_size == 0) throw InvalidInput("block_size must be positive");
  if (record_interval_s <= 0) throw InvalidInput("record_interval_s must be positive");
  if (training_cycles < 2) throw InvalidInput("training_cycles must be at least 2");
  if (!(z_threshold > 0.0) || !std::isfinite(z_threshold)) {
    throw InvalidInput("z threshold must be positive");
  }
  if (!(sigma_floor > 0.0) || !std::isfinite(sigma_floor)) {
    throw InvalidInput("sigma floor must be positive");
  }
  thresholds.validate();
  watchdog.validate();
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(config), tracker_(config.thresholds) {
  config_.validate();
  detector_.threshold = config_.z_threshold;
}

Pipeline::Pipeline(PipelineConfig config, ModelParams model) : Pipeline(config) {
  model_ = model;
}

StepResult Pipeline::step(const RmsRecord& record) {
  StepResult out;
  const auto cycle = tracker_.ingest(record);

  if (cycle) {
    if (!model_) {
      stats_ = train_update(stats_, cycle->features);
      if (stats_.count >= config_.training_cycles) {
        model_ = finalize(stats_, config_.sigma_floor);
      }
    } else {
      const ZScores z = score(*model_, cycle->features);
      const Detection d = detect(detector_, z.composite);
      detector_ = d.state;
      last_composite_ = z.composite;
      last_decision_ = d.is_anomaly ? EventKind::ZScore : EventKind::None;
      if (d.is_anomaly) {
        AnomalyEvent e;
        e.kind = EventKind::ZScore;
        e.detected_at_s = record.timestamp_s;
        e.composite = z.composite;
        e.streak = detector_.streak;
        e.cycle_start_s = cycle->start_s;
        e.cycle_end_s = cycle->end_s;
        out.event = e;
      }
    }
  }

  if (const auto off_since = tracker_.off_since()) {
    if (auto e = check_watchdog(record.timestamp_s, *off_since, config_.watchdog,
                                watchdog_fired_)) {
      watchdog_fired_ = true;
      e->streak = detector_.streak;
      last_decision_ = EventKind::Watchdog;
      out.event = e;
    }
  } else {
    watchdog_fired_ = false;
    if (last_decision_ == EventKind::Watchdog) last_decision_ = EventKind::None;
  }

  out.log.timestamp_s = record.timestamp_s;
  out.log.rms_amps = record.rms_amps;
  out.log.composite_z = last_composite_;
  out.log.event_kind = last_decision_;
  out.log.anomaly_flag = last_decision_ != EventKind::None;
  return out;
}

StepResult Pipeline::step_block(EpochSeconds timestamp_s, const SampleBlock& block) {
  block.validate(config_.block_size);
  return step({timestamp_s, compute_rms(block)});
}

RunResult run_pipeline(const PipelineConfig& config,
                       const std::vector<RmsRecord>& records,
                       const std::optional<ModelParams>& model) {
  Pipeline pipeline = model ? Pipeline(config, *model) : Pipeline(config);
  RunResult result;
  result.log.reserve(records.size());
  for (const auto& r : records) {
    auto s = pipeline.step(r);
    result.log.push_back(s.log);
    if (s.event) result.events.push_back(*s.event);
  }
  if (!pipeline.model()) {
    throw InsufficientTraining(
        "stream ended after " + std::to_string(pipeline.training_stats().count) +
        " of " + std::to_string(config.training_cycles) + " training cycles");
  }
  result.model = *pipeline.model();
  return result;
}

std::vector<RmsRecord> to_rms_records(const std::vector<LogRecord>& log) {
  std::vector<RmsRecord> out;
  out.reserve(log.size());
  for (const auto& r : log) out.push_back({r.timestamp_s, r.rms_amps});
  return out;
}

std::size_t count_composite_mismatches(const std::vector<LogRecord>& original,
                                       const std::vector<LogRecord>& replayed) {
  if (original.size() != replayed.size()) {
    throw InvalidInput("logs differ in length");
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (!original[i].composite_z) continue;
    if (!replayed[i].composite_z ||
        format_fixed4(*original[i].composite_z) !=
            format_fixed4(*replayed[i].composite_z)) {
      ++mismatches;
    }
  }
  return mismatches;
}

}  // namespace zsense
