#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "driftscope/confidence_matrix.hpp"

namespace driftscope {

// Heat-map view: one plasma-colored cell per (constraint, window), rows
// arranged top-down by display_order and grouped into consecutive blocks.
// Blocks are separated by horizontal lines; change points draw vertical
// lines at the first window of each new segment.
struct DriftMapView {
  const ConfidenceMatrix* matrix = nullptr;
  std::vector<int> display_order;  // permutation of all row indices
  std::vector<int> block_sizes;    // sums to the row count
  std::vector<int> change_points;  // 1-based window indices
};

// Both renderers emit a standalone 1200x800 SVG document and are pure
// functions of their inputs. Cells carry class="cell", change-point lines
// class="drift-line", block separators class="cluster-line".
std::string render_drift_map(const DriftMapView& view);

std::string render_drift_chart(const std::vector<double>& mean_series,
                               const std::vector<int>& change_points,
                               const std::vector<std::int64_t>& window_start_ms,
                               const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace driftscope
