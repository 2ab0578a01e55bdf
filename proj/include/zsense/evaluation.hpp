#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zsense/anomaly_event.hpp"
#include "zsense/simulator.hpp"

namespace zsense {

inline constexpr EpochSeconds kDefaultMatchGraceS = 7200;

struct MatchedDetection {
  GroundTruthLabel label;
  AnomalyEvent event;
  EpochSeconds delay_s = 0;  // detected_at - window_start
};

struct KindBreakdown {
  std::size_t labels = 0;
  std::size_t detected = 0;
};

// Event-level scores. Ratios with a zero denominator are left empty.
struct EvalReport {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::vector<MatchedDetection> matches;
  std::vector<AnomalyEvent> unmatched_events;
  std::vector<GroundTruthLabel> missed_labels;
  std::map<std::string, KindBreakdown> by_label_kind;
  std::map<std::string, std::size_t> events_by_kind;
};

// Labels are visited in time order; each takes the earliest unused event
// with detected_at in [window_start - grace, window_end + grace]. Inputs are
// sorted internally, so their order does not matter.
EvalReport evaluate(std::vector<AnomalyEvent> events,
                    std::vector<GroundTruthLabel> truth,
                    EpochSeconds match_grace_s = kDefaultMatchGraceS);

std::string format_report_text(const EvalReport& report);

// "key=value" lines; absent ratios are written as "absent".
std::string format_report_kv(const EvalReport& report);

}  // namespace zsense
