#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "driftscope/event_log.hpp"

namespace driftscope {

// Injected drift positions, either as 1-based trace indices (the first
// trace of the new regime) or directly as window indices.
struct GroundTruth {
  std::vector<std::int64_t> positions;  // strictly increasing
  std::string unit = "trace";           // "trace" or "window"
};

struct EvalResult {
  double precision = 1.0;
  double recall = 1.0;
  double f_score = 1.0;
  std::vector<std::pair<int, std::int64_t>> matches;  // (detected, truth)
};

// Greedy one-to-one matching, nearest pair first; ties by smaller detected
// then smaller truth value. A pair matches when |detected - truth| <=
// tolerance windows. Empty sides use the 0/0 = 1 convention.
EvalResult score(const std::vector<int>& detected,
                 const std::vector<std::int64_t>& truth_windows, int tolerance);

// First window whose majority of traces is at or past the 1-based trace
// position, clamped to [1, win_num].
int window_of_trace(std::int64_t trace_position, const WindowSpec& spec,
                    int win_num);

GroundTruth read_truth_file(const std::string& path);
void write_truth_file(const std::string& path, const GroundTruth& truth);

// How the generated process changes at a drift position.
enum class DriftKind {
  RemoveB,    // b disappears from the flow
  SwapOrder,  // a,b becomes b,a
  Loop,       // the a,b block repeats three times
};

struct DriftSpecEntry {
  std::int64_t position = 0;  // 1-based trace index where the new regime starts
  DriftKind kind = DriftKind::RemoveB;
};

// Synthetic log over activities {a,b,c,d,e}: every trace runs an a,b core
// between random fillers and a closing e, with one-minute spacing between
// trace starts. Each drift entry switches the regime from its position on,
// shifting the confidence of several constraints by large steps.
// Deterministic for a fixed seed.
std::pair<EventLog, GroundTruth> generate_drifting_log(
    std::size_t n_traces, const std::vector<DriftSpecEntry>& drifts,
    std::uint64_t seed);

}  // namespace driftscope
