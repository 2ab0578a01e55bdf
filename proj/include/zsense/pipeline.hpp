#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zsense/anomaly_event.hpp"
#include "zsense/cycle_tracker.hpp"
#include "zsense/event_log.hpp"
#include "zsense/signal_core.hpp"
#include "zsense/zscore_model.hpp"

namespace zsense {

struct PipelineConfig {
  std::size_t block_size = kDefaultBlockSize;
  EpochSeconds record_interval_s = 30;
  StateThresholds thresholds;
  std::uint64_t training_cycles = 50;
  double z_threshold = kDefaultZThreshold;
  WatchdogConfig watchdog;
  double sigma_floor = kDefaultSigmaFloor;

  void validate() const;
};

enum class Phase { Training, Inference };

struct StepResult {
  LogRecord log;
  std::optional<AnomalyEvent> event;
};

// The autonomous two-phase loop: the first training_cycles completed ON
// cycles feed the running statistics, the model is then frozen and every
// later cycle is scored. The OFF watchdog runs in both phases.
//
// State is fixed-size regardless of stream length; nothing per-record or
// per-cycle is retained.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);
  // Skips training and scores with an existing model.
  Pipeline(PipelineConfig config, ModelParams model);

  StepResult step(const RmsRecord& record);
  // Raw-sample ingestion: the block must hold exactly block_size samples.
  StepResult step_block(EpochSeconds timestamp_s, const SampleBlock& block);

  Phase phase() const noexcept { return model_ ? Phase::Inference : Phase::Training; }
  const std::optional<ModelParams>& model() const noexcept { return model_; }
  const FeatureStats& training_stats() const noexcept { return stats_; }
  const DetectorState& detector() const noexcept { return detector_; }
  const PipelineConfig& config() const noexcept { return config_; }

  // Bytes of learning, detection and segmentation state.
  static constexpr std::size_t state_bytes() noexcept {
    return sizeof(FeatureStats) + sizeof(std::optional<ModelParams>) +
           sizeof(DetectorState) + sizeof(CycleTracker);
  }

 private:
  PipelineConfig config_;
  CycleTracker tracker_;
  FeatureStats stats_;
  std::optional<ModelParams> model_;
  DetectorState detector_;
  std::optional<double> last_composite_;
  EventKind last_decision_ = EventKind::None;
  bool watchdog_fired_ = false;
};

struct RunResult {
  std::vector<LogRecord> log;
  std::vector<AnomalyEvent> events;
  ModelParams model;
};

// Throws InsufficientTraining if the stream ends before the model is
// trained (unless a model was supplied).
RunResult run_pipeline(const PipelineConfig& config,
                       const std::vector<RmsRecord>& records,
                       const std::optional<ModelParams>& model = std::nullopt);

std::vector<RmsRecord> to_rms_records(const std::vector<LogRecord>& log);

// Number of records whose composite is present in `original` but is absent
// or prints differently (four decimals) in `replayed`. Logs must align
// record for record.
std::size_t count_composite_mismatches(const std::vector<LogRecord>& original,
                                       const std::vector<LogRecord>& replayed);

}  // namespace zsense
