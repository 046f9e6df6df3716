#include <doctest.h>

#include <Eigen/Core>
#include <random>
#include <vector>

#include "driftscope/clustering.hpp"
#include "driftscope/errors.hpp"
#include "helpers.hpp"

using namespace driftscope;

namespace {

Eigen::VectorXd vec(const std::vector<double>& vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

Eigen::MatrixXd random_distances(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = unit(rng);
  return d;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("correlation distance identities") {
  const Eigen::VectorXd u = vec({1, 2, 3});
  CHECK(correlation_distance(u, vec({2, 4, 6})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(correlation_distance(u, vec({3, 2, 1})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(correlation_distance(u, u) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(correlation_distance(vec({1, 2, 1, 2}), vec({2, 1, 2, 1})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Uncorrelated at exactly zero Pearson.
  CHECK(correlation_distance(vec({1, -1, 1, -1}), vec({1, 1, -1, -1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant series follow the degenerate convention") {
  CHECK(correlation_distance(vec({0.5, 0.5}), vec({0.5, 0.5})) == 0.0);
  CHECK(correlation_distance(vec({0.5, 0.5}), vec({0.7, 0.7})) == 1.0);
  CHECK(correlation_distance(vec({0.5, 0.5}), vec({0.1, 0.9})) == 1.0);
  CHECK(correlation_distance(vec({0.1, 0.9}), vec({0.5, 0.5})) == 1.0);
}

TEST_CASE("correlation distance is invariant under positive affine maps") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> slope(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd u(12), v(12);
    for (int j = 0; j < 12; ++j) {
      u(j) = unit(rng);
      v(j) = unit(rng);
    }
    const double d = correlation_distance(u, v);
    const Eigen::VectorXd w = (slope(rng) * u.array() + unit(rng)).matrix();
    CHECK(correlation_distance(w, v) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("correlation distance validates its inputs") {
  CHECK_THROWS_AS(correlation_distance(vec({1, 2}), vec({1, 2, 3})), ConfigError);
  CHECK_THROWS_AS(correlation_distance(vec({1}), vec({2})), ConfigError);
}

TEST_CASE("pairwise distances are symmetric with a zero diagonal") {
  Eigen::MatrixXd series(3, 4);
  series << 0, 1, 2, 3, 3, 2, 1, 0, 0.5, 0.5, 0.5, 0.5;
  const Eigen::MatrixXd d = correlation_distances(series);
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 3);
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(d(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d(0, 2) == 1.0);
}

TEST_CASE("two leaves merge at their distance") {
  Eigen::MatrixXd d(2, 2);
  d << 0.0, 0.4, 0.4, 0.0;
  const Dendrogram dg = weighted_linkage(d);
  REQUIRE(dg.size() == 1);
  CHECK(dg[0].left == 0);
  CHECK(dg[0].right == 1);
  CHECK(dg[0].height == 0.4);
  CHECK(dg[0].size == 2);
}

TEST_CASE("merged clusters average their distances") {
  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.2, 0.4, 0.2, 0.0, 0.8, 0.4, 0.8, 0.0;
  const Dendrogram dg = weighted_linkage(d);
  REQUIRE(dg.size() == 2);
  CHECK(dg[0].left == 0);
  CHECK(dg[0].right == 1);
  CHECK(dg[0].height == doctest::Approx(0.2).epsilon(1e-12));
  // d({0,1}, 2) = (0.4 + 0.8) / 2.
  CHECK(dg[1].left == 3);
  CHECK(dg[1].right == 2);
  CHECK(dg[1].height == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(dg[1].size == 3);
}

TEST_CASE("ties go to the lowest slot pair") {
  const Eigen::MatrixXd d =
      Eigen::MatrixXd::Constant(4, 4, 0.5) - 0.5 * Eigen::MatrixXd::Identity(4, 4);
  const Dendrogram dg = weighted_linkage(d);
  REQUIRE(dg.size() == 3);
  CHECK(dg[0].left == 0);
  CHECK(dg[0].right == 1);
  CHECK(dg[1].left == 4);
  CHECK(dg[1].right == 2);
  CHECK(dg[2].left == 5);
  CHECK(dg[2].right == 3);
  for (const Merge& m : dg) CHECK(m.height == 0.5);
}

TEST_CASE("linkage matches a from-first-principles reference") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> size(2, 12);
  for (int i = 0; i < 60; ++i) {
    const int n = size(rng);
    const Eigen::MatrixXd d = random_distances(rng, n);
    const Dendrogram dg = weighted_linkage(d);
    const std::vector<testutil::RefMerge> ref = testutil::reference_wpgma(d);
    REQUIRE(dg.size() == ref.size());
    for (std::size_t t = 0; t < dg.size(); ++t) {
      CHECK(dg[t].left == ref[t].left);
      CHECK(dg[t].right == ref[t].right);
      CHECK(dg[t].size == ref[t].size);
      CHECK(dg[t].height == doctest::Approx(ref[t].height).epsilon(1e-9));
    }
  }
}

TEST_CASE("linkage validates its input") {
  CHECK_THROWS_AS(weighted_linkage(Eigen::MatrixXd::Zero(1, 1)), ConfigError);
  CHECK_THROWS_AS(weighted_linkage(Eigen::MatrixXd::Zero(3, 2)), ConfigError);
}

TEST_CASE("cutting separates components connected below the threshold") {
  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 0.5, 0.1, 0.0, 0.5, 0.5, 0.5, 0.0;
  const Dendrogram dg = weighted_linkage(d);

  const ClusterAssignment mid = cut_dendrogram(dg, 3, 0.3);
  CHECK(mid.m == 2);
  CHECK(mid.cluster_of == std::vector<int>{1, 1, 2});
  CHECK(mid.display_order == std::vector<int>{0, 1, 2});

  const ClusterAssignment all = cut_dendrogram(dg, 3, 0.5);
  CHECK(all.m == 1);
  CHECK(all.cluster_of == std::vector<int>{1, 1, 1});

  const ClusterAssignment none = cut_dendrogram(dg, 3, 0.05);
  CHECK(none.m == 3);
  CHECK(none.cluster_of == std::vector<int>{1, 2, 3});
}

TEST_CASE("an over-threshold merge blocks its subtree") {
  // Heights invert: the later merge is lower than the earlier one. The early
  // high merge must not leak connectivity through the low ancestor.
  Dendrogram dg;
  dg.push_back({0, 1, 0.8, 2});
  dg.push_back({3, 2, 0.4, 3});
  const ClusterAssignment ca = cut_dendrogram(dg, 3, 0.5);
  CHECK(ca.m == 3);
  CHECK(ca.cluster_of == std::vector<int>{1, 2, 3});
}

TEST_CASE("cutting validates its input") {
  CHECK_THROWS_AS(cut_dendrogram({}, 0, 0.5), ConfigError);
  CHECK_THROWS_AS(cut_dendrogram({}, -1, 0.5), ConfigError);
  Dendrogram dg;
  dg.push_back({0, 1, 0.2, 2});
  CHECK_THROWS_AS(cut_dendrogram(dg, 3, -0.1), ConfigError);
  CHECK_THROWS_AS(cut_dendrogram(dg, 3, 0.5), ConfigError);  // size mismatch

  const ClusterAssignment lone = cut_dendrogram({}, 1, 0.0);
  CHECK(lone.m == 1);
  CHECK(lone.cluster_of == std::vector<int>{1});
}

TEST_CASE("members are ordered by distance to their cluster mean") {
  Eigen::MatrixXd series(3, 2);
  series << 0, 0, 1, 1, 0.2, 0.2;
  ClusterAssignment ca;
  ca.cluster_of = {1, 1, 1};
  ca.display_order = {0, 1, 2};
  ca.m = 1;
  const ClusterAssignment out = order_within_cluster(series, ca);
  CHECK(out.m == 1);
  // Mean is (0.4, 0.4); row 2 sits closest, then row 0, then row 1.
  CHECK(out.display_order == std::vector<int>{2, 0, 1});
  CHECK(out.cluster_of == std::vector<int>{1, 1, 1});
}

TEST_CASE("clusters are reordered by size with ids reassigned") {
  Eigen::MatrixXd series(5, 2);
  series << 0, 0, 1, 1, 0, 0, 4, 4, 2, 2;
  ClusterAssignment ca;
  ca.cluster_of = {1, 1, 2, 2, 2};
  ca.display_order = {0, 1, 2, 3, 4};
  ca.m = 2;
  const ClusterAssignment out = order_within_cluster(series, ca);
  // The size-3 cluster comes first and takes id 1. Its mean is (2, 2): row 4
  // has zero error, rows 2 and 3 tie and keep ascending row order.
  CHECK(out.cluster_of == std::vector<int>{2, 2, 1, 1, 1});
  CHECK(out.display_order == std::vector<int>{4, 2, 3, 0, 1});
}

TEST_CASE("equal-size clusters order by their smallest member") {
  Eigen::MatrixXd series(4, 2);
  series << 0, 0, 1, 1, 2, 2, 3, 3;
  ClusterAssignment ca;
  ca.cluster_of = {2, 1, 1, 2};
  ca.display_order = {1, 2, 0, 3};
  ca.m = 2;
  const ClusterAssignment out = order_within_cluster(series, ca);
  // Old cluster 2 contains row 0, the smallest member, so it becomes id 1.
  // Within both clusters the errors tie, keeping ascending row order.
  CHECK(out.cluster_of == std::vector<int>{1, 2, 2, 1});
  CHECK(out.display_order == std::vector<int>{0, 3, 1, 2});
}

TEST_CASE("ordering validates the assignment size") {
  ClusterAssignment ca;
  ca.cluster_of = {1, 1};
  ca.m = 1;
  CHECK_THROWS_AS(order_within_cluster(Eigen::MatrixXd::Zero(3, 2), ca),
                  ConfigError);
}

}  // TEST_SUITE
