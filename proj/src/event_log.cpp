#include "zsense/event_log.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "zsense/errors.hpp"

namespace zsense {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::None:
      return "none";
    case EventKind::ZScore:
      return "zscore";
    case EventKind::Watchdog:
      return "watchdog";
  }
  return "none";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) {
  if (text == "none") return EventKind::None;
  if (text == "zscore") return EventKind::ZScore;
  if (text == "watchdog") return EventKind::Watchdog;
  return std::nullopt;
}

namespace csv {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no,
                       std::size_t column) {
  std::int64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc{} ||
      res.ptr != field.data() + field.size()) {
    throw ParseError(line_no, column,
                     "expected an integer, got '" + std::string(field) + "'");
  }
  return v;
}

double parse_double(std::string_view field, std::size_t line_no,
                    std::size_t column) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc{} ||
      res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw ParseError(line_no, column,
                     "expected a number, got '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace csv

void LogRecord::validate() const {
  if (!std::isfinite(rms_amps) || rms_amps < 0.0) {
    throw InvalidInput("log record rms must be finite and non-negative");
  }
  if (composite_z && !std::isfinite(*composite_z)) {
    throw InvalidInput("log record z-score must be finite");
  }
  if (anomaly_flag != (event_kind != EventKind::None)) {
    throw InvalidInput("anomaly flag and event kind disagree");
  }
}

std::string format_fixed4(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 4);
  std::string out(buf, res.ptr);
  // -0.0000 would not survive a round trip as a distinct value anyway.
  if (out == "-0.0000") out = "0.0000";
  return out;
}

std::string serialize_record(const LogRecord& record) {
  std::string out = std::to_string(record.timestamp_s);
  out += ',';
  out += format_fixed4(record.rms_amps);
  out += ',';
  if (record.composite_z) out += format_fixed4(*record.composite_z);
  out += ',';
  out += record.anomaly_flag ? '1' : '0';
  out += ',';
  out += to_string(record.event_kind);
  return out;
}

LogRecord parse_record(std::string_view line, std::size_t line_no) {
  const auto fields = csv::split(line);
  if (fields.size() != 5) {
    throw ParseError(line_no, 0,
                     "expected 5 columns, found " + std::to_string(fields.size()));
  }
  LogRecord r;
  r.timestamp_s = csv::parse_int(fields[0], line_no, 1);
  r.rms_amps = csv::parse_double(fields[1], line_no, 2);
  if (r.rms_amps < 0.0) {
    throw ParseError(line_no, 2, "rms must be non-negative");
  }
  if (!fields[2].empty()) {
    r.composite_z = csv::parse_double(fields[2], line_no, 3);
  }
  if (fields[3] == "0") {
    r.anomaly_flag = false;
  } else if (fields[3] == "1") {
    r.anomaly_flag = true;
  } else {
    throw ParseError(line_no, 4, "flag must be 0 or 1");
  }
  const auto kind = event_kind_from_string(fields[4]);
  if (!kind) {
    throw ParseError(line_no, 5, "unknown kind '" + std::string(fields[4]) + "'");
  }
  r.event_kind = *kind;
  if (r.anomaly_flag != (r.event_kind != EventKind::None)) {
    throw ParseError(line_no, 4, "flag inconsistent with kind");
  }
  return r;
}

void write_log(std::ostream& out, const std::vector<LogRecord>& records) {
  out << kLogHeader << '\n';
  for (const auto& r : records) {
    out << serialize_record(r) << '\n';
  }
}

std::vector<LogRecord> parse_log(std::istream& in, bool strict) {
  std::vector<LogRecord> records;
  csv::for_each_row(in, kLogHeader, [&](std::string_view line, std::size_t no) {
    LogRecord r = parse_record(line, no);
    if (strict && !records.empty() &&
        r.timestamp_s <= records.back().timestamp_s) {
      throw ParseError(no, 1, "timestamp out of order");
    }
    records.push_back(r);
  });
  return records;
}

std::string serialize_event(const AnomalyEvent& e) {
  std::string out(to_string(e.kind));
  out += ',' + std::to_string(e.detected_at_s) + ',';
  if (e.composite) out += format_fixed4(*e.composite);
  out += ',' + std::to_string(e.streak);
  out += ',' + std::to_string(e.cycle_start_s);
  out += ',' + std::to_string(e.cycle_end_s);
  return out;
}

AnomalyEvent parse_event(std::string_view line, std::size_t line_no) {
  const auto fields = csv::split(line);
  if (fields.size() != 6) {
    throw ParseError(line_no, 0,
                     "expected 6 columns, found " + std::to_string(fields.size()));
  }
  AnomalyEvent e;
  const auto kind = event_kind_from_string(fields[0]);
  if (!kind || *kind == EventKind::None) {
    throw ParseError(line_no, 1, "event kind must be zscore or watchdog");
  }
  e.kind = *kind;
  e.detected_at_s = csv::parse_int(fields[1], line_no, 2);
  if (!fields[2].empty()) e.composite = csv::parse_double(fields[2], line_no, 3);
  if (e.composite.has_value() != (e.kind == EventKind::ZScore)) {
    throw ParseError(line_no, 3, "composite must be present iff kind is zscore");
  }
  const auto streak = csv::parse_int(fields[3], line_no, 4);
  if (streak < 0) throw ParseError(line_no, 4, "streak must be non-negative");
  e.streak = static_cast<std::uint32_t>(streak);
  e.cycle_start_s = csv::parse_int(fields[4], line_no, 5);
  e.cycle_end_s = csv::parse_int(fields[5], line_no, 6);
  if (e.detected_at_s < e.cycle_start_s) {
    throw ParseError(line_no, 2, "detection precedes the implicated interval");
  }
  return e;
}

void write_events(std::ostream& out, const std::vector<AnomalyEvent>& events) {
  out << kEventsHeader << '\n';
  for (const auto& e : events) {
    out << serialize_event(e) << '\n';
  }
}

std::vector<AnomalyEvent> parse_events(std::istream& in) {
  std::vector<AnomalyEvent> events;
  csv::for_each_row(in, kEventsHeader, [&](std::string_view line, std::size_t no) {
    events.push_back(parse_event(line, no));
  });
  return events;
}

}  // namespace zsense
