#include "driftscope/confidence_matrix.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "driftscope/errors.hpp"

namespace driftscope {

namespace {

int worker_count(std::size_t tasks, int max_threads) {
  int n = max_threads;
  if (n <= 0) {
    if (const char* env = std::getenv("DRIFTSCOPE_THREADS")) {
      n = std::atoi(env);
    }
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(tasks, 1)));
}

// One constraint's confidence across all windows. Per-trace stats are
// evaluated once, then prefix sums give each window in O(1).
void fill_row(const EventLog& log, const std::vector<SubLog>& wins,
              const Constraint& c, Eigen::MatrixXd& values, Eigen::Index row,
              std::vector<std::int64_t>& act, std::vector<std::int64_t>& sat,
              std::vector<std::int64_t>& has) {
  const std::size_t n = log.size();
  act[0] = sat[0] = has[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const TraceEval e = evaluate_trace(c, log.traces[i].activities);
    act[i + 1] = act[i] + e.activations;
    sat[i + 1] = sat[i] + e.satisfied;
    has[i + 1] = has[i] + (e.activations > 0);
  }
  for (const SubLog& w : wins) {
    const std::size_t lo = w.first;
    const std::size_t hi = w.first + w.count;
    const std::int64_t a = act[hi] - act[lo];
    double v = 0.0;
    if (a > 0) {
      const double sup = static_cast<double>(sat[hi] - sat[lo]) / static_cast<double>(a);
      v = sup * static_cast<double>(has[hi] - has[lo]) / static_cast<double>(w.count);
    }
    values(row, w.index - 1) = v;
  }
}

}  // namespace

ConfidenceMatrix build_matrix(const EventLog& log, const WindowSpec& spec,
                              const std::vector<TemplateKind>& repertoire,
                              int max_threads) {
  const std::vector<SubLog> wins = windows(log, spec);
  if (wins.size() < 2)
    throw ConfigError("drift detection needs at least 2 windows, got " +
                      std::to_string(wins.size()));

  ConfidenceMatrix m;
  m.constraints = constraint_space(log.alphabet.size(), repertoire);
  m.labels.reserve(m.constraints.size());
  for (const Constraint& c : m.constraints)
    m.labels.push_back(constraint_text(c, log));
  for (const SubLog& w : wins) {
    m.window_start_ms.push_back(w.start_time_ms);
    m.window_end_ms.push_back(w.end_time_ms);
  }
  m.values.resize(static_cast<Eigen::Index>(m.constraints.size()),
                  static_cast<Eigen::Index>(wins.size()));

  const int threads = worker_count(m.constraints.size(), max_threads);
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    std::vector<std::int64_t> act(log.size() + 1), sat(log.size() + 1),
        has(log.size() + 1);
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= m.constraints.size()) return;
      fill_row(log, wins, m.constraints[i], m.values,
               static_cast<Eigen::Index>(i), act, sat, has);
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return m;
}

PrunedMatrix prune_inactive(const ConfidenceMatrix& m) {
  PrunedMatrix out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if ((m.values.row(i).array() != 0.0).any())
      out.kept.push_back(i);
    else
      out.removed.push_back(i);
  }
  out.matrix.values.resize(static_cast<Eigen::Index>(out.kept.size()), m.cols());
  for (std::size_t r = 0; r < out.kept.size(); ++r) {
    out.matrix.values.row(static_cast<Eigen::Index>(r)) = m.values.row(out.kept[r]);
    if (!m.constraints.empty())
      out.matrix.constraints.push_back(m.constraints[static_cast<std::size_t>(out.kept[r])]);
    out.matrix.labels.push_back(m.labels[static_cast<std::size_t>(out.kept[r])]);
  }
  out.matrix.window_start_ms = m.window_start_ms;
  out.matrix.window_end_ms = m.window_end_ms;
  return out;
}

void write_matrix_csv(std::ostream& out, const ConfidenceMatrix& m) {
  out << "constraint";
  for (std::int64_t t : m.window_start_ms) out << ',' << format_timestamp_ms(t);
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const std::string& label = m.labels[static_cast<std::size_t>(i)];
    if (label.find_first_of(",\"\n") != std::string::npos) {
      out << '"';
      for (char c : label) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << label;
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f", m.values(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_matrix_csv_file(const std::string& path, const ConfidenceMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix_csv(out, m);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

ConfidenceMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix CSV");

  ConfidenceMatrix m;
  {
    std::stringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
      if (first) {
        if (cell != "constraint")
          throw ParseError("matrix CSV must start with a 'constraint' column");
        first = false;
        continue;
      }
      m.window_start_ms.push_back(parse_timestamp(cell));
    }
  }
  m.window_end_ms = m.window_start_ms;
  if (m.window_start_ms.empty())
    throw ParseError("matrix CSV header lists no windows");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    // Label field, optionally quoted.
    std::size_t pos = 0;
    std::string label;
    if (line[0] == '"') {
      pos = 1;
      while (pos < line.size()) {
        if (line[pos] == '"') {
          if (pos + 1 < line.size() && line[pos + 1] == '"') {
            label.push_back('"');
            pos += 2;
          } else {
            ++pos;
            break;
          }
        } else {
          label.push_back(line[pos++]);
        }
      }
    } else {
      pos = line.find(',');
      if (pos == std::string::npos) pos = line.size();
      label = line.substr(0, pos);
    }
    std::vector<double> vals;
    while (pos < line.size()) {
      if (line[pos] != ',')
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected ',' after field");
      ++pos;
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      try {
        vals.push_back(std::stod(line.substr(pos, end - pos)));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad confidence value");
      }
      pos = end;
    }
    if (vals.size() != m.window_start_ms.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(m.window_start_ms.size()) +
                       " values, got " + std::to_string(vals.size()));
    m.labels.push_back(std::move(label));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ParseError("matrix CSV has no constraint rows");

  m.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(m.window_start_ms.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

ConfidenceMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_matrix_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace driftscope
