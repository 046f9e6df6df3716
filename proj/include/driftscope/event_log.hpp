#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace driftscope {

// Activities are interned: a trace stores indices into the owning log's
// alphabet. The alphabet is sorted lexicographically, so index order equals
// name order.
using ActivityId = std::int32_t;

struct Trace {
  std::string case_id;
  std::int64_t first_timestamp_ms = 0;  // UTC epoch milliseconds
  std::vector<ActivityId> activities;   // non-empty
};

struct EventLog {
  std::vector<std::string> alphabet;  // sorted, distinct activity names
  std::vector<Trace> traces;          // multiset semantics: duplicates allowed

  std::size_t size() const { return traces.size(); }
  const std::string& activity_name(ActivityId id) const {
    return alphabet[static_cast<std::size_t>(id)];
  }
};

// winStep < winSize gives sliding windows, winStep == winSize tumbling ones.
struct WindowSpec {
  std::int64_t win_size = 0;
  std::int64_t win_step = 0;
};

// Contiguous slice of a sorted log. A view: the log must outlive it.
struct SubLog {
  int index = 0;               // 1-based window ordinal
  std::size_t first = 0;       // offset of the first trace in the sorted log
  std::size_t count = 0;       // always == win_size
  std::int64_t start_time_ms = 0;
  std::int64_t end_time_ms = 0;
  const EventLog* log = nullptr;

  const Trace& trace(std::size_t i) const { return log->traces[first + i]; }
};

// Builder used by the parsers: collects traces with textual activities, then
// finalize() interns them against the sorted alphabet.
class EventLogBuilder {
public:
  void add_trace(std::string case_id, std::int64_t first_timestamp_ms,
                 std::vector<std::string> activities);
  EventLog finalize() &&;
  bool empty() const { return raw_.empty(); }

private:
  struct RawTrace {
    std::string case_id;
    std::int64_t first_timestamp_ms;
    std::vector<std::string> activities;
  };
  std::vector<RawTrace> raw_;
};

// Stable sort by the timestamp of each trace's first event; ties keep input
// order.
EventLog sort_by_first_timestamp(EventLog log);
bool is_sorted_by_first_timestamp(const EventLog& log);

// Number of produced sub-logs: floor((|L| - winSize - winStep) / winStep).
// Throws ConfigError when the spec is invalid or the formula yields < 1.
int window_count(std::size_t log_size, const WindowSpec& spec);

// Sub-log j (1-based) covers traces [(j-1)*winStep, (j-1)*winStep + winSize).
// Trailing traces beyond the last window are not emitted.
std::vector<SubLog> windows(const EventLog& log, const WindowSpec& spec);

// Count of traces after the last window, not covered by any sub-log.
std::size_t dropped_tail(std::size_t log_size, const WindowSpec& spec);

// Timestamps: RFC 3339 ("2011-01-10T12:30:00Z", fractional seconds and
// numeric offsets accepted) or plain epoch milliseconds.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp_ms(std::int64_t epoch_ms);   // with milliseconds
std::string format_timestamp_date(std::int64_t epoch_ms); // YYYY-MM-DD

}  // namespace driftscope
