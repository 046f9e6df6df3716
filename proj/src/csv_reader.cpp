#include "driftscope/csv_reader.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "driftscope/errors.hpp"

namespace driftscope {

namespace {

// Reads one CSV record.  Returns false on end of input with nothing read.
// line is advanced past every newline consumed, including those inside
// quoted fields.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 std::size_t& line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool quoted = false;
  for (;; c = in.get()) {
    if (quoted) {
      if (c == EOF) throw ParseError("unterminated quoted field at line " +
                                     std::to_string(line));
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == EOF) {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      if (c == '\n') ++line;
      return true;
    } else {
      field.push_back(static_cast<char>(c));
    }
  }
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

EventLog read_csv_log(std::istream& in, const CsvColumns& columns) {
  std::size_t line = 1;
  std::vector<std::string> header;
  if (!read_record(in, header, line))
    throw ParseError("empty CSV input");

  const auto find_column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ParseError("CSV header is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t case_col = find_column(columns.case_id);
  const std::size_t act_col = find_column(columns.activity);
  const std::size_t time_col = find_column(columns.timestamp);

  struct PendingTrace {
    std::int64_t first_ts = 0;
    std::vector<std::string> activities;
  };
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::string> case_ids;
  std::vector<PendingTrace> pending;

  std::vector<std::string> row;
  while (true) {
    const std::size_t row_line = line;
    if (!read_record(in, row, line)) break;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      throw ParseError("line " + std::to_string(row_line) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(row.size()));
    std::int64_t ts;
    try {
      ts = parse_timestamp(row[time_col]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(row_line) + ": " + e.what());
    }
    auto [it, inserted] = index_of.emplace(row[case_col], pending.size());
    if (inserted) {
      case_ids.push_back(row[case_col]);
      pending.emplace_back();
      pending.back().first_ts = ts;
    }
    pending[it->second].activities.push_back(row[act_col]);
  }

  EventLogBuilder builder;
  for (std::size_t i = 0; i < pending.size(); ++i)
    builder.add_trace(std::move(case_ids[i]), pending[i].first_ts,
                      std::move(pending[i].activities));
  if (builder.empty()) throw ParseError("CSV contains no events");
  return sort_by_first_timestamp(std::move(builder).finalize());
}

EventLog read_csv_log_file(const std::string& path, const CsvColumns& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_csv_log(in, columns);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_csv_log(std::ostream& out, const EventLog& log,
                   std::int64_t event_spacing_ms) {
  out << "case_id,activity,timestamp\n";
  for (const auto& trace : log.traces) {
    std::int64_t ts = trace.first_timestamp_ms;
    for (ActivityId id : trace.activities) {
      write_field(out, trace.case_id);
      out << ',';
      write_field(out, log.activity_name(id));
      out << ',' << format_timestamp_ms(ts) << '\n';
      ts += event_spacing_ms;
    }
  }
}

void write_csv_log_file(const std::string& path, const EventLog& log,
                        std::int64_t event_spacing_ms) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv_log(out, log, event_spacing_ms);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace driftscope
