#pragma once

// Shared test utilities: compact in-memory logs, an independent
// quantifier-based constraint checker, a from-first-principles WPGMA
// reference, and filesystem scratch space.

#include <Eigen/Core>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftscope/declare.hpp"
#include "driftscope/event_log.hpp"

namespace testutil {

// One trace per string, one activity per character, trace starts one minute
// apart in input order (so the log is already timestamp-sorted).
inline driftscope::EventLog make_log(const std::vector<std::string>& traces) {
  driftscope::EventLogBuilder b;
  std::int64_t ts = 1577836800000;  // 2020-01-01T00:00:00Z
  int i = 0;
  for (const std::string& t : traces) {
    std::vector<std::string> acts;
    acts.reserve(t.size());
    for (char c : t) acts.emplace_back(1, c);
    b.add_trace("t" + std::to_string(++i), ts, std::move(acts));
    ts += 60000;
  }
  return std::move(b).finalize();
}

// A SubLog view spanning every trace of `log`.
inline driftscope::SubLog whole_log(const driftscope::EventLog& log) {
  driftscope::SubLog s;
  s.index = 1;
  s.first = 0;
  s.count = log.size();
  s.start_time_ms = log.traces.front().first_timestamp_ms;
  s.end_time_ms = log.traces.back().first_timestamp_ms;
  s.log = &log;
  return s;
}

inline driftscope::ActivityId id_of(const driftscope::EventLog& log, char c) {
  const std::string name(1, c);
  for (std::size_t i = 0; i < log.alphabet.size(); ++i)
    if (log.alphabet[i] == name)
      return static_cast<driftscope::ActivityId>(i);
  throw std::runtime_error(std::string("activity not in alphabet: ") + c);
}

inline driftscope::Constraint binary(const driftscope::EventLog& log,
                                     driftscope::TemplateKind kind, char a,
                                     char b) {
  return {kind, id_of(log, a), id_of(log, b)};
}

inline driftscope::Constraint unary(const driftscope::EventLog& log, char a) {
  return {driftscope::TemplateKind::AtMostOne, id_of(log, a), -1};
}

// Quantifier transcription of each template, one explicit position scan per
// activation. Deliberately naive; independent of the library's single-pass
// evaluator.
inline driftscope::TraceEval oracle_eval(driftscope::TemplateKind kind, char a,
                                         char b, const std::string& t) {
  using driftscope::TemplateKind;
  const int n = static_cast<int>(t.size());
  driftscope::TraceEval r;
  const auto activate = [&](bool ok) {
    ++r.activations;
    if (ok) ++r.satisfied;
  };
  switch (kind) {
    case TemplateKind::AtMostOne:
      for (int i = 0; i < n; ++i) {
        if (t[i] != a) continue;
        bool other = false;
        for (int j = 0; j < n; ++j)
          if (j != i && t[j] == a) other = true;
        activate(!other);
      }
      break;
    case TemplateKind::Response:
      for (int i = 0; i < n; ++i) {
        if (t[i] != a) continue;
        bool ok = false;
        for (int j = i + 1; j < n; ++j)
          if (t[j] == b) ok = true;
        activate(ok);
      }
      break;
    case TemplateKind::AlternateResponse:
      for (int i = 0; i < n; ++i) {
        if (t[i] != a) continue;
        bool ok = false;
        for (int j = i + 1; j < n; ++j) {
          if (t[j] != b) continue;
          bool blocked = false;
          for (int l = i + 1; l < j; ++l)
            if (t[l] == a) blocked = true;
          if (!blocked) ok = true;
        }
        activate(ok);
      }
      break;
    case TemplateKind::ChainResponse:
      for (int i = 0; i < n; ++i)
        if (t[i] == a) activate(i + 1 < n && t[i + 1] == b);
      break;
    case TemplateKind::Precedence:
      for (int i = 0; i < n; ++i) {
        if (t[i] != b) continue;
        bool ok = false;
        for (int j = 0; j < i; ++j)
          if (t[j] == a) ok = true;
        activate(ok);
      }
      break;
    case TemplateKind::AlternatePrecedence:
      for (int i = 0; i < n; ++i) {
        if (t[i] != b) continue;
        bool ok = false;
        for (int j = 0; j < i; ++j) {
          if (t[j] != a) continue;
          bool blocked = false;
          for (int l = j + 1; l < i; ++l)
            if (t[l] == b) blocked = true;
          if (!blocked) ok = true;
        }
        activate(ok);
      }
      break;
    case TemplateKind::ChainPrecedence:
      for (int i = 0; i < n; ++i)
        if (t[i] == b) activate(i - 1 >= 0 && t[i - 1] == a);
      break;
    case TemplateKind::NotSuccession:
      for (int i = 0; i < n; ++i) {
        if (t[i] != a) continue;
        bool bad = false;
        for (int j = i + 1; j < n; ++j)
          if (t[j] == b) bad = true;
        activate(!bad);
      }
      break;
  }
  return r;
}

// A trace classifies as satisfying when every activation is satisfied
// (vacuously when nothing activates).
inline bool oracle_satisfies(driftscope::TemplateKind kind, char a, char b,
                             const std::string& t) {
  const driftscope::TraceEval r = oracle_eval(kind, a, b, t);
  return r.activations == r.satisfied;
}

struct RefMerge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

// WPGMA from first principles: every cluster keeps a leaf weight map in
// which each merge halves both sides' weights, and the distance between two
// clusters is the weighted sum of the original matrix over all leaf pairs.
// Quadratic per step and recomputed from scratch, so it shares nothing with
// the update-formula implementation. Clusters stay ordered by smallest leaf
// and ties pick the first pair in that order.
inline std::vector<RefMerge> reference_wpgma(const Eigen::MatrixXd& d0) {
  struct Node {
    int id;
    int min_leaf;
    std::map<int, double> weight;
    int leaves;
  };
  const int n = static_cast<int>(d0.rows());
  if (n < 2 || d0.cols() != n) throw std::runtime_error("bad distance matrix");
  std::vector<Node> act;
  for (int i = 0; i < n; ++i) act.push_back({i, i, {{i, 1.0}}, 1});
  const auto dist = [&](const Node& x, const Node& y) {
    double s = 0.0;
    for (const auto& [lx, wx] : x.weight)
      for (const auto& [ly, wy] : y.weight) s += wx * wy * d0(lx, ly);
    return s;
  };
  std::vector<RefMerge> out;
  int next_id = n;
  while (act.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = dist(act[0], act[1]);
    for (std::size_t i = 0; i < act.size(); ++i)
      for (std::size_t j = i + 1; j < act.size(); ++j) {
        const double d = dist(act[i], act[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    Node merged;
    merged.id = next_id++;
    merged.min_leaf = act[bi].min_leaf;
    merged.leaves = act[bi].leaves + act[bj].leaves;
    for (const auto& [l, w] : act[bi].weight) merged.weight[l] += 0.5 * w;
    for (const auto& [l, w] : act[bj].weight) merged.weight[l] += 0.5 * w;
    out.push_back({act[bi].id, act[bj].id, best, merged.leaves});
    act.erase(act.begin() + static_cast<std::ptrdiff_t>(bj));
    act[bi] = std::move(merged);
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "driftscope_test_XXXXXX")
            .string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (std::filesystem::path(path_) / name).string();
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline int count_occurrences(const std::string& hay, const std::string& needle) {
  int count = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++count;
  return count;
}

}  // namespace testutil
