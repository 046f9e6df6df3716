#include "driftscope/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftscope/errors.hpp"

namespace driftscope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPruneSlack = 1e-12;

void validate(const ChangePointConfig& cfg) {
  if (cfg.min_segment < 1)
    throw ConfigError("min_segment must be >= 1");
  if (cfg.penalty && *cfg.penalty <= 0.0)
    throw ConfigError("penalty must be positive");
  if (cfg.bandwidth && *cfg.bandwidth <= 0.0)
    throw ConfigError("bandwidth must be positive");
}

double resolve_bandwidth(const Eigen::MatrixXd& series,
                         const ChangePointConfig& cfg) {
  if (cfg.kernel != KernelKind::Rbf) return 1.0;
  if (cfg.bandwidth) return *cfg.bandwidth;
  return median_heuristic_bandwidth(series);
}

}  // namespace

SegmentCostModel::SegmentCostModel(const Eigen::MatrixXd& series,
                                   KernelKind kernel, double bandwidth)
    : n_(static_cast<int>(series.cols())), kernel_(kernel) {
  if (n_ < 1) throw ConfigError("segment cost needs at least one column");
  if (kernel_ == KernelKind::Linear) {
    sq_prefix_.resize(n_ + 1);
    col_prefix_.resize(series.rows(), n_ + 1);
    sq_prefix_(0) = 0.0;
    col_prefix_.col(0).setZero();
    for (int t = 0; t < n_; ++t) {
      sq_prefix_(t + 1) = sq_prefix_(t) + series.col(t).squaredNorm();
      col_prefix_.col(t + 1) = col_prefix_.col(t) + series.col(t);
    }
  } else {
    if (bandwidth <= 0.0) throw ConfigError("bandwidth must be positive");
    const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
    Eigen::MatrixXd gram(n_, n_);
    for (int t = 0; t < n_; ++t) {
      gram(t, t) = 1.0;
      for (int u = t + 1; u < n_; ++u) {
        const double d2 = (series.col(t) - series.col(u)).squaredNorm();
        gram(t, u) = gram(u, t) = std::exp(-d2 * inv);
      }
    }
    gram_prefix_ = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
    for (int t = 0; t < n_; ++t)
      for (int u = 0; u < n_; ++u)
        gram_prefix_(t + 1, u + 1) = gram(t, u) + gram_prefix_(t, u + 1) +
                                     gram_prefix_(t + 1, u) - gram_prefix_(t, u);
  }
}

double SegmentCostModel::cost(int s, int e) const {
  if (s < 0 || e > n_ || s >= e)
    throw ConfigError("segment cost requires 0 <= s < e <= columns");
  const double m = static_cast<double>(e - s);
  double c;
  if (kernel_ == KernelKind::Linear) {
    const double sq = sq_prefix_(e) - sq_prefix_(s);
    const double mean_sq =
        (col_prefix_.col(e) - col_prefix_.col(s)).squaredNorm() / m;
    c = sq - mean_sq;
  } else {
    const double block = gram_prefix_(e, e) - gram_prefix_(s, e) -
                         gram_prefix_(e, s) + gram_prefix_(s, s);
    c = m - block / m;
  }
  return c > 0.0 ? c : 0.0;
}

double segment_cost(const Eigen::MatrixXd& series, int s, int e,
                    const ChangePointConfig& cfg) {
  validate(cfg);
  SegmentCostModel model(series, cfg.kernel, resolve_bandwidth(series, cfg));
  return model.cost(s, e);
}

double median_heuristic_bandwidth(const Eigen::MatrixXd& series) {
  const int n = static_cast<int>(series.cols());
  if (n < 2)
    throw ConfigError("median heuristic needs at least 2 columns");
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int t = 0; t < n; ++t)
    for (int u = t + 1; u < n; ++u)
      dists.push_back((series.col(t) - series.col(u)).norm());
  std::sort(dists.begin(), dists.end());
  const std::size_t k = dists.size();
  const double median =
      k % 2 == 1 ? dists[k / 2] : 0.5 * (dists[k / 2 - 1] + dists[k / 2]);
  return median > 0.0 ? median : 1.0;
}

namespace {

Segmentation backtrack(const std::vector<int>& prev, int n, double total) {
  Segmentation out;
  out.total_cost = total;
  for (int t = n; t > 0; t = prev[static_cast<std::size_t>(t)]) {
    const int s = prev[static_cast<std::size_t>(t)];
    if (s > 0) out.change_points.push_back(s + 1);
  }
  std::reverse(out.change_points.begin(), out.change_points.end());
  return out;
}

// Shared dynamic program; PELT pruning is switched by `prune`. Split
// positions s are admissible when s == 0 or s >= min_seg, and every segment
// has at least min_seg columns.
//
// The prune test is evaluated at t0 = t - (min_seg - 1), not at t itself:
// a point dominated at t0 stays dominated for every t' > t because the
// dominating split t0 is itself admissible there (t' - t0 >= min_seg),
// which is exactly what the superadditivity argument needs. Testing at t
// would discard points that are still required while segments ending in
// (t, t + min_seg) are too short to route around them.
Segmentation penalized_dp(const SegmentCostModel& model, double beta,
                          int min_seg, bool prune) {
  const int n = model.size();
  std::vector<double> f(static_cast<std::size_t>(n) + 1, kInf);
  std::vector<int> prev(static_cast<std::size_t>(n) + 1, -1);
  f[0] = 0.0;
  std::vector<int> candidates{0};
  for (int t = min_seg; t <= n; ++t) {
    const int fresh = t - min_seg;
    if (fresh >= min_seg) candidates.push_back(fresh);
    double best = kInf;
    int arg = -1;
    for (int s : candidates) {
      const double v = f[static_cast<std::size_t>(s)] + model.cost(s, t) + beta;
      if (v < best) {
        best = v;
        arg = s;
      }
    }
    f[static_cast<std::size_t>(t)] = best;
    prev[static_cast<std::size_t>(t)] = arg;
    const int t0 = t - (min_seg - 1);
    if (prune && (t0 == 0 || t0 >= min_seg) &&
        f[static_cast<std::size_t>(t0)] != kInf) {
      std::vector<int> keep;
      keep.reserve(candidates.size());
      for (int s : candidates) {
        if (t0 - s < min_seg ||
            f[static_cast<std::size_t>(s)] + model.cost(s, t0) <=
                f[static_cast<std::size_t>(t0)] + kPruneSlack)
          keep.push_back(s);
      }
      candidates.swap(keep);
    }
  }
  return backtrack(prev, n, f[static_cast<std::size_t>(n)]);
}

double resolve_beta(const SegmentCostModel& model,
                    const Eigen::MatrixXd& series,
                    const ChangePointConfig& cfg);

Segmentation detect(const Eigen::MatrixXd& series, const ChangePointConfig& cfg,
                    bool prune) {
  validate(cfg);
  const int n = static_cast<int>(series.cols());
  if (n < 2 * cfg.min_segment)
    throw ConfigError("series of " + std::to_string(n) +
                      " windows is too short for min_segment " +
                      std::to_string(cfg.min_segment));
  SegmentCostModel model(series, cfg.kernel, resolve_bandwidth(series, cfg));
  return penalized_dp(model, resolve_beta(model, series, cfg),
                      cfg.min_segment, prune);
}

AutoPenalty select_penalty(const SegmentCostModel& model, int min_seg) {
  AutoPenalty out;
  const int n = model.size();
  const double lower = 0.1;
  double upper = 10.0 * model.cost(0, n) / static_cast<double>(n);
  if (upper <= lower) upper = lower;

  constexpr int kGridSize = 20;
  const double log_lo = std::log(lower);
  const double log_hi = std::log(upper);
  bool any = false;
  for (int i = 0; i < kGridSize; ++i) {
    const double p =
        std::exp(log_lo + (log_hi - log_lo) * i / (kGridSize - 1.0));
    out.grid.push_back(p);
    const Segmentation seg = penalized_dp(model, p, min_seg, true);
    out.change_counts.push_back(static_cast<int>(seg.change_points.size()));
    any = any || !seg.change_points.empty();
  }
  if (!any) {
    out.degenerate = true;
    out.penalty = out.grid.back();
    return out;
  }

  // Elbow: maximum second difference of the count curve; ties go to the
  // larger penalty so the choice lands on the stable side of the knee.
  double best_curv = -kInf;
  std::size_t best_i = out.grid.size() - 1;
  for (std::size_t i = 1; i + 1 < out.grid.size(); ++i) {
    const double curv = static_cast<double>(out.change_counts[i - 1]) -
                        2.0 * static_cast<double>(out.change_counts[i]) +
                        static_cast<double>(out.change_counts[i + 1]);
    if (curv >= best_curv) {
      best_curv = curv;
      best_i = i;
    }
  }
  out.penalty = out.grid[best_i];
  return out;
}

double resolve_beta(const SegmentCostModel& model,
                    const Eigen::MatrixXd& series,
                    const ChangePointConfig& cfg) {
  (void)series;
  if (cfg.penalty) return *cfg.penalty;
  return select_penalty(model, cfg.min_segment).penalty;
}

}  // namespace

Segmentation pelt_detect(const Eigen::MatrixXd& series,
                         const ChangePointConfig& cfg) {
  return detect(series, cfg, true);
}

Segmentation brute_force_segmentation(const Eigen::MatrixXd& series,
                                      const ChangePointConfig& cfg) {
  if (series.cols() > 50)
    throw ConfigError("brute-force segmentation refuses more than 50 windows");
  return detect(series, cfg, false);
}

AutoPenalty auto_penalty(const Eigen::MatrixXd& series,
                         const ChangePointConfig& cfg) {
  validate(cfg);
  const int n = static_cast<int>(series.cols());
  if (n < 2 * cfg.min_segment)
    throw ConfigError("series of " + std::to_string(n) +
                      " windows is too short for min_segment " +
                      std::to_string(cfg.min_segment));
  SegmentCostModel model(series, cfg.kernel, resolve_bandwidth(series, cfg));
  return select_penalty(model, cfg.min_segment);
}

AutoPenalty resolve_penalty(const Eigen::MatrixXd& series,
                            const ChangePointConfig& cfg) {
  if (cfg.penalty) {
    AutoPenalty out;
    out.penalty = *cfg.penalty;
    return out;
  }
  return auto_penalty(series, cfg);
}

}  // namespace driftscope
