#pragma once

#include <Eigen/Core>
#include <vector>

namespace driftscope {

// 1 - Pearson correlation, in [0,2]. Degenerate variance convention: two
// equal constant series are at distance 0, a constant against anything else
// is at distance 1.
double correlation_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Symmetric pairwise distances between the rows of a series matrix.
Eigen::MatrixXd correlation_distances(const Eigen::MatrixXd& series);

// One agglomerative merge. Nodes follow the usual labeling: leaves are
// 0..n-1, the merge at step t creates node n+t.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;  // leaves under the new node
};

using Dendrogram = std::vector<Merge>;

// WPGMA: after merging i and j, d(ij, k) = (d(i,k) + d(j,k)) / 2. The
// closest pair wins each step; ties go to the lowest pair of smallest-leaf
// indices. Heights may invert, so cutting must not assume monotonicity.
Dendrogram weighted_linkage(Eigen::MatrixXd distances);

struct ClusterAssignment {
  std::vector<int> cluster_of;     // row index -> cluster id in 1..m
  std::vector<int> display_order;  // all rows, grouped by cluster
  int m = 0;
};

// Rows land in one cluster iff they are connected through merges of height
// <= threshold (an over-threshold merge blocks its subtree even when an
// ancestor merge is lower). Cluster ids are assigned in display order.
ClusterAssignment cut_dendrogram(const Dendrogram& dg, int n_leaves,
                                 double threshold);

// Display refinement: clusters ordered by descending size (ties toward the
// smallest member index), members by ascending mean squared error to their
// cluster's mean series (ties by row index). Ids reassigned in that order.
ClusterAssignment order_within_cluster(const Eigen::MatrixXd& series,
                                       const ClusterAssignment& ca);

}  // namespace driftscope
