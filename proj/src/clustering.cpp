#include "driftscope/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftscope/errors.hpp"

namespace driftscope {

double correlation_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    throw ConfigError("correlation distance requires equal series lengths");
  if (u.size() < 2)
    throw ConfigError("correlation distance requires length >= 2");

  const bool u_const = u.maxCoeff() == u.minCoeff();
  const bool v_const = v.maxCoeff() == v.minCoeff();
  if (u_const || v_const) {
    if (u_const && v_const && u(0) == v(0)) return 0.0;
    return 1.0;
  }

  const Eigen::VectorXd uc = u.array() - u.mean();
  const Eigen::VectorXd vc = v.array() - v.mean();
  const double r = uc.dot(vc) / std::sqrt(uc.squaredNorm() * vc.squaredNorm());
  return std::clamp(1.0 - r, 0.0, 2.0);
}

Eigen::MatrixXd correlation_distances(const Eigen::MatrixXd& series) {
  const Eigen::Index n = series.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) =
          correlation_distance(series.row(i).transpose(), series.row(j).transpose());
  return d;
}

Dendrogram weighted_linkage(Eigen::MatrixXd distances) {
  const int n = static_cast<int>(distances.rows());
  if (n < 2 || distances.cols() != n)
    throw ConfigError("linkage requires a square distance matrix of order >= 2");

  // Slot i always holds the cluster whose smallest leaf is i, so scanning
  // slots in ascending order realizes the lowest-pair tie-break.
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<int> node_id(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::iota(node_id.begin(), node_id.end(), 0);

  Dendrogram out;
  out.reserve(static_cast<std::size_t>(n) - 1);
  for (int step = 0; step < n - 1; ++step) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!alive[static_cast<std::size_t>(j)]) continue;
        if (distances(i, j) < best) {
          best = distances(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    Merge m;
    m.left = node_id[static_cast<std::size_t>(bi)];
    m.right = node_id[static_cast<std::size_t>(bj)];
    m.height = best;
    m.size = size[static_cast<std::size_t>(bi)] + size[static_cast<std::size_t>(bj)];
    out.push_back(m);

    for (int k = 0; k < n; ++k) {
      if (!alive[static_cast<std::size_t>(k)] || k == bi || k == bj) continue;
      distances(bi, k) = distances(k, bi) =
          0.5 * (distances(bi, k) + distances(bj, k));
    }
    node_id[static_cast<std::size_t>(bi)] = n + step;
    size[static_cast<std::size_t>(bi)] = m.size;
    alive[static_cast<std::size_t>(bj)] = false;
  }
  return out;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

ClusterAssignment cut_dendrogram(const Dendrogram& dg, int n_leaves,
                                 double threshold) {
  if (n_leaves < 1) throw ConfigError("cut requires at least one leaf");
  if (threshold < 0.0) throw ConfigError("cut threshold must be >= 0");
  if (!dg.empty() &&
      static_cast<int>(dg.size()) != n_leaves - 1)
    throw ConfigError("dendrogram size does not match leaf count");

  UnionFind uf(2 * n_leaves - 1);
  for (std::size_t t = 0; t < dg.size(); ++t) {
    if (dg[t].height <= threshold) {
      const int node = n_leaves + static_cast<int>(t);
      uf.unite(dg[t].left, node);
      uf.unite(dg[t].right, node);
    }
  }

  // Components over leaves, in order of smallest member.
  ClusterAssignment ca;
  ca.cluster_of.assign(static_cast<std::size_t>(n_leaves), 0);
  std::vector<int> id_of_root(static_cast<std::size_t>(2 * n_leaves - 1), 0);
  for (int leaf = 0; leaf < n_leaves; ++leaf) {
    const int root = uf.find(leaf);
    if (id_of_root[static_cast<std::size_t>(root)] == 0)
      id_of_root[static_cast<std::size_t>(root)] = ++ca.m;
    ca.cluster_of[static_cast<std::size_t>(leaf)] =
        id_of_root[static_cast<std::size_t>(root)];
  }
  ca.display_order.resize(static_cast<std::size_t>(n_leaves));
  std::iota(ca.display_order.begin(), ca.display_order.end(), 0);
  std::stable_sort(ca.display_order.begin(), ca.display_order.end(),
                   [&](int a, int b) {
                     return ca.cluster_of[static_cast<std::size_t>(a)] <
                            ca.cluster_of[static_cast<std::size_t>(b)];
                   });
  return ca;
}

ClusterAssignment order_within_cluster(const Eigen::MatrixXd& series,
                                       const ClusterAssignment& ca) {
  const int n = static_cast<int>(series.rows());
  if (static_cast<std::size_t>(n) != ca.cluster_of.size())
    throw ConfigError("cluster assignment does not match series row count");

  std::vector<std::vector<int>> members(static_cast<std::size_t>(ca.m) + 1);
  for (int i = 0; i < n; ++i)
    members[static_cast<std::size_t>(ca.cluster_of[static_cast<std::size_t>(i)])]
        .push_back(i);

  std::vector<int> ids(static_cast<std::size_t>(ca.m));
  std::iota(ids.begin(), ids.end(), 1);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const auto& ma = members[static_cast<std::size_t>(a)];
    const auto& mb = members[static_cast<std::size_t>(b)];
    if (ma.size() != mb.size()) return ma.size() > mb.size();
    return ma.front() < mb.front();
  });

  ClusterAssignment out;
  out.m = ca.m;
  out.cluster_of.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const auto& rows = members[static_cast<std::size_t>(ids[pos])];
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(series.cols());
    for (int r : rows) mean += series.row(r);
    mean /= static_cast<double>(rows.size());

    std::vector<double> mse(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
      mse[k] = (series.row(rows[k]) - mean).squaredNorm() /
               static_cast<double>(series.cols());
    std::vector<std::size_t> perm(rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return mse[a] < mse[b];
    });

    const int new_id = static_cast<int>(pos) + 1;
    for (std::size_t k : perm) {
      out.display_order.push_back(rows[k]);
      out.cluster_of[static_cast<std::size_t>(rows[k])] = new_id;
    }
  }
  return out;
}

}  // namespace driftscope
