#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "driftscope/changepoint.hpp"
#include "driftscope/clustering.hpp"
#include "driftscope/confidence_matrix.hpp"

namespace driftscope {

// Fluctuation score of a cluster: sum over member series of
// sqrt(1 + (delta * win_num)^2), where delta is the series' total absolute
// consecutive change. Constant members contribute exactly 1 each, so the
// score is bounded below by the cluster size.
double erratic(const Eigen::MatrixXd& cluster_rows);

// PELT over the whole multivariate series.
Segmentation overall_changepoints(const ConfidenceMatrix& m,
                                  const ChangePointConfig& cfg);

struct ClusterDrift {
  int id = 0;
  std::vector<int> rows;  // matrix row indices, in display order
  Segmentation segmentation;
  std::vector<double> mean_series;  // per-window average confidence
  double penalty_used = 0.0;
  double ertc = 0.0;
};

// Per-cluster detection + statistics, one entry per cluster id 1..m in id
// order. Each cluster resolves its own auto penalty when cfg leaves it unset.
std::vector<ClusterDrift> cluster_changepoints(const ConfidenceMatrix& m,
                                               const ClusterAssignment& ca,
                                               const ChangePointConfig& cfg);

// Table-style explanation row: percentages with one decimal.
struct ConstraintStats {
  std::string text;
  double min_pct = 0.0;
  double max_pct = 0.0;
  double mean_pct = 0.0;
  double pre_pct = 0.0;   // mean before the change point
  double post_pct = 0.0;  // mean from the change point on
};

// Statistics for a cluster's constraints after redundancy removal. The
// change point is the 1-based first window of the new segment; pass 0 when
// the cluster has none, making pre and post equal the overall mean.
std::vector<ConstraintStats> explain_drift(const ConfidenceMatrix& m,
                                           const std::vector<int>& rows,
                                           int change_point,
                                           double epsilon = 0.01);

}  // namespace driftscope
