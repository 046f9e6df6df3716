#pragma once

#include <iosfwd>
#include <string>

#include "driftscope/event_log.hpp"

namespace driftscope {

// Column names in the CSV header that identify the three required fields.
struct CsvColumns {
  std::string case_id = "case_id";
  std::string activity = "activity";
  std::string timestamp = "timestamp";
};

// Reads an event log from CSV with one event per row.  Quoted fields and
// embedded quotes follow the usual doubling convention.  Rows sharing a
// case id form one trace ordered by appearance; the trace timestamp is the
// timestamp of its first event.  Traces are returned sorted by that
// timestamp (ties keep first-appearance order).
EventLog read_csv_log(std::istream& in, const CsvColumns& columns = {});
EventLog read_csv_log_file(const std::string& path, const CsvColumns& columns = {});

// Writes one event per row with header case_id,activity,timestamp and
// RFC 3339 UTC timestamps.
void write_csv_log(std::ostream& out, const EventLog& log,
                   std::int64_t event_spacing_ms = 1000);
void write_csv_log_file(const std::string& path, const EventLog& log,
                        std::int64_t event_spacing_ms = 1000);

}  // namespace driftscope
