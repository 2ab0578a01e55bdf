#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zsense/anomaly_event.hpp"
#include "zsense/signal_core.hpp"

namespace zsense {

inline constexpr std::string_view kLogHeader = "timestamp,rms,zscore,flag,kind";
inline constexpr std::string_view kEventsHeader =
    "kind,detected_at,composite,streak,cycle_start,cycle_end";

// One line of the streaming log. rms and composite are written with four
// fractional digits; composite is empty until the model has scored a cycle.
struct LogRecord {
  EpochSeconds timestamp_s = 0;
  double rms_amps = 0.0;
  std::optional<double> composite_z;
  bool anomaly_flag = false;
  EventKind event_kind = EventKind::None;

  // Throws InvalidInput if flag and kind disagree or rms is negative.
  void validate() const;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

// Fixed-point, '.' separator, independent of the global locale.
std::string format_fixed4(double value);

std::string serialize_record(const LogRecord& record);

// line_no is only used to label errors.
LogRecord parse_record(std::string_view line, std::size_t line_no = 1);

// Writes the header followed by one line per record.
void write_log(std::ostream& out, const std::vector<LogRecord>& records);

// Parses a whole log. The header line is optional. In strict mode every
// timestamp must be greater than the previous one.
std::vector<LogRecord> parse_log(std::istream& in, bool strict = true);

std::string serialize_event(const AnomalyEvent& event);
AnomalyEvent parse_event(std::string_view line, std::size_t line_no = 1);
void write_events(std::ostream& out, const std::vector<AnomalyEvent>& events);
std::vector<AnomalyEvent> parse_events(std::istream& in);

namespace csv {

// Splits one line on ',' (no quoting; none of the schemas need it).
std::vector<std::string_view> split(std::string_view line);

// Field parsers; throw ParseError naming line_no and the 1-based column.
std::int64_t parse_int(std::string_view field, std::size_t line_no,
                       std::size_t column);
double parse_double(std::string_view field, std::size_t line_no,
                    std::size_t column);

// Reads lines, strips '\r', skips blank lines and an optional header.
// Each callback receives (line, line_no).
template <typename F>
void for_each_row(std::istream& in, std::string_view header, F&& fn);

}  // namespace csv

}  // namespace zsense

#include "zsense/detail/csv_rows.hpp"
