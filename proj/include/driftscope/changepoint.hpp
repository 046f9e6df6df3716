#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace driftscope {

enum class KernelKind { Linear, Rbf };

struct ChangePointConfig {
  KernelKind kernel = KernelKind::Rbf;
  std::optional<double> bandwidth;  // unset: median heuristic (rbf only)
  std::optional<double> penalty;    // unset: auto-selected
  int min_segment = 2;
};

// change_points holds the 1-based first window of each new segment, strictly
// increasing; total_cost = sum of segment costs + penalty * segment count.
struct Segmentation {
  std::vector<int> change_points;
  double total_cost = 0.0;
};

// Kernel segment cost over columns of a series:
//   c(s,e) = sum_{t in [s,e)} k(x_t,x_t) - (1/(e-s)) sum_{t,u in [s,e)} k(x_t,x_u)
// Linear kernel answers queries from prefix sums in O(rows); rbf from 2-D
// prefix sums over the Gram matrix in O(1).
class SegmentCostModel {
 public:
  SegmentCostModel(const Eigen::MatrixXd& series, KernelKind kernel,
                   double bandwidth = 1.0);

  // Cost of the half-open column range [s, e); requires 0 <= s < e <= size().
  double cost(int s, int e) const;
  int size() const { return n_; }

 private:
  int n_ = 0;
  KernelKind kernel_;
  Eigen::VectorXd sq_prefix_;    // linear: prefix of squared column norms
  Eigen::MatrixXd col_prefix_;   // linear: prefix of column sums
  Eigen::MatrixXd gram_prefix_;  // rbf: 2-D prefix over the Gram matrix
};

// Convenience wrapper over a fresh model; bandwidth resolved like pelt_detect.
double segment_cost(const Eigen::MatrixXd& series, int s, int e,
                    const ChangePointConfig& cfg);

// Median of pairwise Euclidean distances between distinct columns; 1.0 when
// the median degenerates to 0. Requires >= 2 columns.
double median_heuristic_bandwidth(const Eigen::MatrixXd& series);

// Exact penalized segmentation via PELT; pruning keeps optimality because
// the kernel cost never increases when a segment is split.
Segmentation pelt_detect(const Eigen::MatrixXd& series,
                         const ChangePointConfig& cfg);

// O(n^2) dynamic program without pruning, as an exactness oracle. Refuses
// series longer than 50 windows.
Segmentation brute_force_segmentation(const Eigen::MatrixXd& series,
                                      const ChangePointConfig& cfg);

// Elbow-selected penalty: #change-points over a 20-value log-spaced grid,
// maximum curvature wins, ties toward the larger penalty. degenerate marks
// the all-counts-zero fallback to the grid maximum.
struct AutoPenalty {
  double penalty = 0.0;
  bool degenerate = false;
  std::vector<double> grid;
  std::vector<int> change_counts;
};

AutoPenalty auto_penalty(const Eigen::MatrixXd& series,
                         const ChangePointConfig& cfg);

// The penalty pelt_detect would use: cfg.penalty when set, the auto
// selection otherwise.
AutoPenalty resolve_penalty(const Eigen::MatrixXd& series,
                            const ChangePointConfig& cfg);

}  // namespace driftscope
