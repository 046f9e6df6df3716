#include "driftscope/event_log.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>

#include "driftscope/errors.hpp"

namespace driftscope {

void EventLogBuilder::add_trace(std::string case_id,
                                std::int64_t first_timestamp_ms,
                                std::vector<std::string> activities) {
  raw_.push_back({std::move(case_id), first_timestamp_ms, std::move(activities)});
}

EventLog EventLogBuilder::finalize() && {
  std::map<std::string, ActivityId> ids;
  for (const auto& t : raw_)
    for (const auto& a : t.activities) ids.emplace(a, 0);

  EventLog log;
  log.alphabet.reserve(ids.size());
  ActivityId next = 0;
  for (auto& [name, id] : ids) {
    id = next++;
    log.alphabet.push_back(name);
  }

  log.traces.reserve(raw_.size());
  for (auto& t : raw_) {
    Trace out;
    out.case_id = std::move(t.case_id);
    out.first_timestamp_ms = t.first_timestamp_ms;
    out.activities.reserve(t.activities.size());
    for (const auto& a : t.activities) out.activities.push_back(ids.at(a));
    log.traces.push_back(std::move(out));
  }
  return log;
}

EventLog sort_by_first_timestamp(EventLog log) {
  std::stable_sort(log.traces.begin(), log.traces.end(),
                   [](const Trace& a, const Trace& b) {
                     return a.first_timestamp_ms < b.first_timestamp_ms;
                   });
  return log;
}

bool is_sorted_by_first_timestamp(const EventLog& log) {
  return std::is_sorted(log.traces.begin(), log.traces.end(),
                        [](const Trace& a, const Trace& b) {
                          return a.first_timestamp_ms < b.first_timestamp_ms;
                        });
}

int window_count(std::size_t log_size, const WindowSpec& spec) {
  const auto n = static_cast<std::int64_t>(log_size);
  if (spec.win_step < 1 || spec.win_size < spec.win_step || spec.win_size > n)
    throw ConfigError("window spec requires 1 <= winStep <= winSize <= |L| (got winSize=" +
                      std::to_string(spec.win_size) + ", winStep=" +
                      std::to_string(spec.win_step) + ", |L|=" + std::to_string(n) + ")");
  // floor((|L| - winSize - winStep) / winStep); numerator may be negative
  const std::int64_t num = n - spec.win_size - spec.win_step;
  const std::int64_t win_num =
      num >= 0 ? num / spec.win_step
               : -((-num + spec.win_step - 1) / spec.win_step);
  if (win_num < 1)
    throw ConfigError("window configuration produces " + std::to_string(win_num) +
                      " windows; decrease winSize/winStep");
  return static_cast<int>(win_num);
}

std::vector<SubLog> windows(const EventLog& log, const WindowSpec& spec) {
  if (!is_sorted_by_first_timestamp(log))
    throw ConfigError("windows() requires a log sorted by first timestamp");
  const int win_num = window_count(log.size(), spec);
  std::vector<SubLog> out;
  out.reserve(static_cast<std::size_t>(win_num));
  for (int j = 1; j <= win_num; ++j) {
    SubLog s;
    s.index = j;
    s.first = static_cast<std::size_t>((j - 1) * spec.win_step);
    s.count = static_cast<std::size_t>(spec.win_size);
    s.log = &log;
    s.start_time_ms = log.traces[s.first].first_timestamp_ms;
    s.end_time_ms = log.traces[s.first + s.count - 1].first_timestamp_ms;
    out.push_back(s);
  }
  return out;
}

std::size_t dropped_tail(std::size_t log_size, const WindowSpec& spec) {
  const int win_num = window_count(log_size, spec);
  const auto covered = static_cast<std::size_t>(
      (static_cast<std::int64_t>(win_num) - 1) * spec.win_step + spec.win_size);
  return log_size - covered;
}

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
  if (from >= to || to > s.size()) return false;
  for (std::size_t i = from; i < to; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = static_cast<int>(y - era * 400);
  const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int doe = static_cast<int>(z - era * 146097);
  const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
  if (text.empty()) throw ParseError("empty timestamp");

  // Epoch milliseconds: optional sign, digits only.
  const std::size_t digits_from = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (all_digits(text, digits_from, text.size())) {
    try {
      return std::stoll(text);
    } catch (const std::exception&) {
      throw ParseError("epoch timestamp out of range: " + text);
    }
  }

  // RFC 3339: YYYY-MM-DD[T ]hh:mm:ss[.frac](Z|±hh:mm|±hhmm)
  const auto fail = [&]() -> std::int64_t {
    throw ParseError("unparseable timestamp: " + text);
  };
  const std::string& s = text;
  if (s.size() < 19) return fail();
  if (!all_digits(s, 0, 4) || s[4] != '-' || !all_digits(s, 5, 7) ||
      s[7] != '-' || !all_digits(s, 8, 10))
    return fail();
  if ((s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !all_digits(s, 11, 13) ||
      s[13] != ':' || !all_digits(s, 14, 16) || s[16] != ':' ||
      !all_digits(s, 17, 19))
    return fail();

  const int year = std::stoi(s.substr(0, 4));
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  const int hour = std::stoi(s.substr(11, 2));
  const int minute = std::stoi(s.substr(14, 2));
  const int second = std::stoi(s.substr(17, 2));
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60)
    return fail();

  std::size_t pos = 19;
  std::int64_t millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    std::size_t end = pos + 1;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
    if (end == pos + 1) return fail();
    std::string frac = s.substr(pos + 1, std::min<std::size_t>(end - pos - 1, 3));
    while (frac.size() < 3) frac.push_back('0');
    millis = std::stoll(frac);
    pos = end;
  }

  std::int64_t offset_minutes = 0;
  if (pos == s.size()) {
    // No zone designator; treat as UTC.
  } else if (s[pos] == 'Z' || s[pos] == 'z') {
    if (pos + 1 != s.size()) return fail();
  } else if (s[pos] == '+' || s[pos] == '-') {
    const bool neg = s[pos] == '-';
    std::string rest = s.substr(pos + 1);
    int oh = 0, om = 0;
    if (rest.size() == 5 && rest[2] == ':' && all_digits(rest, 0, 2) &&
        all_digits(rest, 3, 5)) {
      oh = std::stoi(rest.substr(0, 2));
      om = std::stoi(rest.substr(3, 2));
    } else if (rest.size() == 4 && all_digits(rest, 0, 4)) {
      oh = std::stoi(rest.substr(0, 2));
      om = std::stoi(rest.substr(2, 2));
    } else {
      return fail();
    }
    offset_minutes = (neg ? -1 : 1) * (oh * 60 + om);
  } else {
    return fail();
  }

  const std::int64_t days = days_from_civil(year, month, day);
  std::int64_t total =
      ((days * 24 + hour) * 60 + minute) * 60 + second;
  total -= offset_minutes * 60;
  return total * 1000 + millis;
}

std::string format_timestamp_ms(std::int64_t epoch_ms) {
  std::int64_t ms = epoch_ms % 1000;
  std::int64_t sec = epoch_ms / 1000;
  if (ms < 0) {
    ms += 1000;
    sec -= 1;
  }
  std::int64_t days = sec / 86400;
  std::int64_t rem = sec % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  int mo, d;
  civil_from_days(days, y, mo, d);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02dT%02d:%02d:%02d.%03dZ",
                static_cast<long long>(y), mo, d, static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60),
                static_cast<int>(ms));
  return buf;
}

std::string format_timestamp_date(std::int64_t epoch_ms) {
  return format_timestamp_ms(epoch_ms).substr(0, 10);
}

}  // namespace driftscope
