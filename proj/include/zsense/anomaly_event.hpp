#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "zsense/signal_core.hpp"

namespace zsense {

enum class EventKind { None, ZScore, Watchdog };

std::string_view to_string(EventKind kind);
// Accepts "none", "zscore", "watchdog"; anything else yields nullopt.
std::optional<EventKind> event_kind_from_string(std::string_view text);

// A detector or watchdog firing. For z-score events the implicated interval
// is the scored ON cycle; for watchdog events it is the OFF period so far.
struct AnomalyEvent {
  EventKind kind = EventKind::ZScore;
  EpochSeconds detected_at_s = 0;
  std::optional<double> composite;  // z-score events only
  std::uint32_t streak = 0;
  EpochSeconds cycle_start_s = 0;
  EpochSeconds cycle_end_s = 0;

  friend bool operator==(const AnomalyEvent&, const AnomalyEvent&) = default;
};

}  // namespace zsense
