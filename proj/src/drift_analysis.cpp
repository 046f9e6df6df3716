#include "driftscope/drift_analysis.hpp"

#include <cmath>

#include "driftscope/errors.hpp"

namespace driftscope {

double erratic(const Eigen::MatrixXd& cluster_rows) {
  if (cluster_rows.rows() < 1)
    throw ConfigError("erratic score requires a non-empty cluster");
  const double win_num = static_cast<double>(cluster_rows.cols());
  double score = 0.0;
  for (Eigen::Index i = 0; i < cluster_rows.rows(); ++i) {
    double delta = 0.0;
    for (Eigen::Index j = 0; j + 1 < cluster_rows.cols(); ++j)
      delta += std::abs(cluster_rows(i, j + 1) - cluster_rows(i, j));
    score += std::sqrt(1.0 + delta * win_num * delta * win_num);
  }
  return score;
}

Segmentation overall_changepoints(const ConfidenceMatrix& m,
                                  const ChangePointConfig& cfg) {
  return pelt_detect(m.values, cfg);
}

namespace {

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& values,
                        const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t k = 0; k < rows.size(); ++k)
    out.row(static_cast<Eigen::Index>(k)) = values.row(rows[k]);
  return out;
}

}  // namespace

std::vector<ClusterDrift> cluster_changepoints(const ConfidenceMatrix& m,
                                               const ClusterAssignment& ca,
                                               const ChangePointConfig& cfg) {
  std::vector<ClusterDrift> out(static_cast<std::size_t>(ca.m));
  for (int id = 1; id <= ca.m; ++id) {
    ClusterDrift& cd = out[static_cast<std::size_t>(id - 1)];
    cd.id = id;
    for (int row : ca.display_order)
      if (ca.cluster_of[static_cast<std::size_t>(row)] == id)
        cd.rows.push_back(row);

    const Eigen::MatrixXd sub = rows_of(m.values, cd.rows);
    ChangePointConfig local = cfg;
    const AutoPenalty ap = resolve_penalty(sub, local);
    local.penalty = ap.penalty;
    cd.penalty_used = ap.penalty;
    cd.segmentation = pelt_detect(sub, local);
    cd.ertc = erratic(sub);

    const Eigen::RowVectorXd mean = sub.colwise().mean();
    cd.mean_series.assign(mean.data(), mean.data() + mean.size());
  }
  return out;
}

namespace {

double pct(double v) { return std::round(v * 1000.0) / 10.0; }

}  // namespace

std::vector<ConstraintStats> explain_drift(const ConfidenceMatrix& m,
                                           const std::vector<int>& rows,
                                           int change_point, double epsilon) {
  const int win_num = static_cast<int>(m.cols());
  if (change_point < 0 || change_point > win_num)
    throw ConfigError("change point outside the window range");

  std::vector<Constraint> constraints;
  std::vector<std::vector<double>> series;
  for (int r : rows) {
    if (!m.constraints.empty())
      constraints.push_back(m.constraints[static_cast<std::size_t>(r)]);
    std::vector<double> s(static_cast<std::size_t>(win_num));
    for (int j = 0; j < win_num; ++j)
      s[static_cast<std::size_t>(j)] = m.values(r, j);
    series.push_back(std::move(s));
  }

  std::vector<std::size_t> kept;
  if (constraints.size() == series.size()) {
    kept = subsumption_reduce(constraints, series, epsilon);
  } else {
    // Label-only matrices (loaded from CSV) skip redundancy removal.
    kept.resize(series.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  }

  std::vector<ConstraintStats> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) {
    const int r = rows[k];
    const auto row = m.values.row(r);
    ConstraintStats st;
    st.text = m.labels[static_cast<std::size_t>(r)];
    st.min_pct = pct(row.minCoeff());
    st.max_pct = pct(row.maxCoeff());
    st.mean_pct = pct(row.mean());
    if (change_point >= 2) {
      st.pre_pct = pct(row.head(change_point - 1).mean());
      st.post_pct = pct(row.tail(win_num - change_point + 1).mean());
    } else {
      st.pre_pct = st.mean_pct;
      st.post_pct = st.mean_pct;
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace driftscope
