#include "driftscope/evaluation.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>

#include <json.hpp>

#include "driftscope/errors.hpp"

namespace driftscope {

EvalResult score(const std::vector<int>& detected,
                 const std::vector<std::int64_t>& truth_windows,
                 int tolerance) {
  if (tolerance < 0) throw ConfigError("tolerance must be >= 0");

  struct Pair {
    std::int64_t dist;
    std::size_t d, t;
  };
  std::vector<Pair> pairs;
  for (std::size_t d = 0; d < detected.size(); ++d)
    for (std::size_t t = 0; t < truth_windows.size(); ++t) {
      const std::int64_t dist = std::abs(static_cast<std::int64_t>(detected[d]) -
                                         truth_windows[t]);
      if (dist <= tolerance) pairs.push_back({dist, d, t});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.d != b.d) return a.d < b.d;
    return a.t < b.t;
  });

  EvalResult out;
  std::vector<bool> d_used(detected.size(), false);
  std::vector<bool> t_used(truth_windows.size(), false);
  for (const Pair& p : pairs) {
    if (d_used[p.d] || t_used[p.t]) continue;
    d_used[p.d] = t_used[p.t] = true;
    out.matches.emplace_back(detected[p.d], truth_windows[p.t]);
  }

  const double matched = static_cast<double>(out.matches.size());
  out.precision =
      detected.empty() ? 1.0 : matched / static_cast<double>(detected.size());
  out.recall = truth_windows.empty()
                   ? 1.0
                   : matched / static_cast<double>(truth_windows.size());
  out.f_score = (out.precision > 0.0 && out.recall > 0.0)
                    ? 2.0 * out.precision * out.recall /
                          (out.precision + out.recall)
                    : 0.0;
  return out;
}

int window_of_trace(std::int64_t trace_position, const WindowSpec& spec,
                    int win_num) {
  // Window j covers 1-based traces [(j-1)*step+1, (j-1)*step+size]; its
  // majority lies at or past p once the window midpoint does:
  // (j-1)*step + (size+1)/2 >= p, doubled to stay in integers.
  const std::int64_t lhs_target = 2 * trace_position - spec.win_size - 1;
  std::int64_t j;
  if (lhs_target <= 0) {
    j = 1;
  } else {
    j = (lhs_target + 2 * spec.win_step - 1) / (2 * spec.win_step) + 1;
  }
  return static_cast<int>(std::clamp<std::int64_t>(j, 1, win_num));
}

GroundTruth read_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  GroundTruth out;
  if (!j.is_object() || !j.contains("positions") || !j["positions"].is_array())
    throw ParseError(path + ": truth file needs a 'positions' array");
  for (const auto& p : j["positions"]) {
    if (!p.is_number_integer())
      throw ParseError(path + ": positions must be integers");
    out.positions.push_back(p.get<std::int64_t>());
  }
  out.unit = j.value("unit", std::string("trace"));
  if (out.unit != "trace" && out.unit != "window")
    throw ParseError(path + ": unit must be \"trace\" or \"window\"");
  for (std::size_t i = 1; i < out.positions.size(); ++i)
    if (out.positions[i] <= out.positions[i - 1])
      throw ParseError(path + ": positions must be strictly increasing");
  return out;
}

void write_truth_file(const std::string& path, const GroundTruth& truth) {
  nlohmann::ordered_json j;
  j["positions"] = truth.positions;
  j["unit"] = truth.unit;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

namespace {

// Bounded draw with fixed consumption: one engine call per draw, identical
// across platforms.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

std::pair<EventLog, GroundTruth> generate_drifting_log(
    std::size_t n_traces, const std::vector<DriftSpecEntry>& drifts,
    std::uint64_t seed) {
  if (n_traces == 0) throw ConfigError("generator needs at least one trace");
  for (std::size_t i = 0; i < drifts.size(); ++i) {
    const std::int64_t p = drifts[i].position;
    if (p < 2 || p > static_cast<std::int64_t>(n_traces))
      throw ConfigError("drift position " + std::to_string(p) +
                        " outside [2, " + std::to_string(n_traces) + "]");
    if (i > 0 && p <= drifts[i - 1].position)
      throw ConfigError("drift positions must be strictly increasing");
  }

  std::mt19937_64 rng(seed);
  constexpr std::int64_t kStartMs = 1577836800000;  // 2020-01-01T00:00:00Z
  const char* fillers[2] = {"c", "d"};

  EventLogBuilder builder;
  GroundTruth truth;
  truth.unit = "trace";
  for (const DriftSpecEntry& d : drifts) truth.positions.push_back(d.position);

  for (std::size_t i = 0; i < n_traces; ++i) {
    // Active regime: base before the first drift position, then the kind of
    // the latest drift at or before this trace.
    int regime = -1;
    for (std::size_t k = 0; k < drifts.size(); ++k)
      if (static_cast<std::int64_t>(i) + 1 >= drifts[k].position)
        regime = static_cast<int>(k);

    std::vector<std::string> acts;
    if (draw(rng, 2) == 1) acts.push_back(fillers[draw(rng, 2)]);

    if (regime < 0) {
      acts.push_back("a");
      acts.push_back("b");
    } else {
      switch (drifts[static_cast<std::size_t>(regime)].kind) {
        case DriftKind::RemoveB:
          acts.push_back("a");
          break;
        case DriftKind::SwapOrder:
          acts.push_back("b");
          acts.push_back("a");
          break;
        case DriftKind::Loop:
          for (int rep = 0; rep < 3; ++rep) {
            acts.push_back("a");
            acts.push_back("b");
          }
          break;
      }
    }

    const std::uint64_t tail = draw(rng, 3);
    for (std::uint64_t k = 0; k < tail; ++k)
      acts.push_back(fillers[draw(rng, 2)]);
    acts.push_back("e");

    builder.add_trace(std::to_string(i + 1),
                      kStartMs + static_cast<std::int64_t>(i) * 60000, std::move(acts));
  }
  return {std::move(builder).finalize(), std::move(truth)};
}

}  // namespace driftscope
