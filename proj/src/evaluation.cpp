#include "zsense/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

#include "zsense/event_log.hpp"

namespace zsense {

namespace {

std::string ratio_text(const std::optional<double>& v) {
  if (!v) return "absent";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), *v,
                                 std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

}  // namespace

EvalReport evaluate(std::vector<AnomalyEvent> events,
                    std::vector<GroundTruthLabel> truth,
                    EpochSeconds match_grace_s) {
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.detected_at_s, a.kind, a.cycle_start_s) <
           std::tie(b.detected_at_s, b.kind, b.cycle_start_s);
  });
  std::sort(truth.begin(), truth.end(), [](const auto& a, const auto& b) {
    return std::tie(a.window_start_s, a.window_end_s, a.kind) <
           std::tie(b.window_start_s, b.window_end_s, b.kind);
  });

  EvalReport report;
  std::vector<bool> used(events.size(), false);
  for (const auto& label : truth) {
    auto& kind = report.by_label_kind[std::string(to_string(label.kind))];
    ++kind.labels;
    const EpochSeconds lo = label.window_start_s - match_grace_s;
    const EpochSeconds hi = label.window_end_s + match_grace_s;
    bool matched = false;
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (used[j]) continue;
      const EpochSeconds t = events[j].detected_at_s;
      if (t > hi) break;
      if (t < lo) continue;
      used[j] = true;
      matched = true;
      ++kind.detected;
      report.matches.push_back({label, events[j], t - label.window_start_s});
      break;
    }
    if (!matched) report.missed_labels.push_back(label);
  }
  for (std::size_t j = 0; j < events.size(); ++j) {
    ++report.events_by_kind[std::string(to_string(events[j].kind))];
    if (!used[j]) report.unmatched_events.push_back(events[j]);
  }

  report.true_positives = report.matches.size();
  report.false_positives = report.unmatched_events.size();
  report.false_negatives = report.missed_labels.size();
  const double tp = static_cast<double>(report.true_positives);
  if (report.true_positives + report.false_positives > 0) {
    report.precision = tp / static_cast<double>(report.true_positives +
                                                report.false_positives);
  }
  if (report.true_positives + report.false_negatives > 0) {
    report.recall = tp / static_cast<double>(report.true_positives +
                                             report.false_negatives);
  }
  if (report.precision && report.recall && *report.precision + *report.recall > 0.0) {
    report.f1 = 2.0 * *report.precision * *report.recall /
                (*report.precision + *report.recall);
  }
  return report;
}

std::string format_report_text(const EvalReport& r) {
  std::string out;
  out += "events: TP=" + std::to_string(r.true_positives) +
         " FP=" + std::to_string(r.false_positives) +
         " FN=" + std::to_string(r.false_negatives) + "\n";
  out += "precision: " + ratio_text(r.precision) + "\n";
  out += "recall:    " + ratio_text(r.recall) + "\n";
  out += "f1:        " + ratio_text(r.f1) + "\n";
  for (const auto& [kind, b] : r.by_label_kind) {
    out += "  " + kind + ": " + std::to_string(b.detected) + "/" +
           std::to_string(b.labels) + " detected\n";
  }
  for (const auto& m : r.matches) {
    out += "  " + std::string(to_string(m.label.kind)) + " @" +
           std::to_string(m.label.window_start_s) + " -> " +
           std::string(to_string(m.event.kind)) + " @" +
           std::to_string(m.event.detected_at_s) +
           " delay=" + std::to_string(m.delay_s) + "s\n";
  }
  for (const auto& e : r.unmatched_events) {
    out += "  false positive: " + std::string(to_string(e.kind)) + " @" +
           std::to_string(e.detected_at_s) + "\n";
  }
  for (const auto& l : r.missed_labels) {
    out += "  missed: " + std::string(to_string(l.kind)) + " @" +
           std::to_string(l.window_start_s) + "\n";
  }
  return out;
}

std::string format_report_kv(const EvalReport& r) {
  std::string out;
  out += "true_positives=" + std::to_string(r.true_positives) + "\n";
  out += "false_positives=" + std::to_string(r.false_positives) + "\n";
  out += "false_negatives=" + std::to_string(r.false_negatives) + "\n";
  out += "precision=" + ratio_text(r.precision) + "\n";
  out += "recall=" + ratio_text(r.recall) + "\n";
  out += "f1=" + ratio_text(r.f1) + "\n";
  for (const auto& [kind, b] : r.by_label_kind) {
    out += "labels." + kind + "=" + std::to_string(b.labels) + "\n";
    out += "detected." + kind + "=" + std::to_string(b.detected) + "\n";
  }
  for (const auto& [kind, n] : r.events_by_kind) {
    out += "events." + kind + "=" + std::to_string(n) + "\n";
  }
  for (std::size_t i = 0; i < r.matches.size(); ++i) {
    const auto& m = r.matches[i];
    const std::string key = "match." + std::to_string(i) + ".";
    out += key + "label_kind=" + std::string(to_string(m.label.kind)) + "\n";
    out += key + "event_kind=" + std::string(to_string(m.event.kind)) + "\n";
    out += key + "window_start=" + std::to_string(m.label.window_start_s) + "\n";
    out += key + "detected_at=" + std::to_string(m.event.detected_at_s) + "\n";
    out += key + "delay_s=" + std::to_string(m.delay_s) + "\n";
  }
  return out;
}

}  // namespace zsense
