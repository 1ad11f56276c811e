#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "awpri/cluster.hpp"
#include "awpri/errors.hpp"
#include "awpri/rng.hpp"

#include "../support/oracles.hpp"

using namespace awpri;
using namespace awpri::oracles;

namespace {

Eigen::MatrixXd four_points() {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 0, 1, 10, 0, 10, 1;
  return p;
}

Eigen::MatrixXd random_points(Rng& rng, int n, int d) {
  Eigen::MatrixXd p(n, d);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.uniform();
  return p;
}

}  // namespace

TEST(KMeans, SingleCluster) {
  Rng rng(1);
  auto p = random_points(rng, 20, 3);
  auto s = kmeans(p, 1, 7);
  const Eigen::RowVectorXd mean = p.colwise().mean();
  EXPECT_LT((s.centroids.row(0) - mean).norm(), 1e-12);
  EXPECT_NEAR(s.wss, (p.rowwise() - mean).squaredNorm(), 1e-12);
  EXPECT_FALSE(s.silhouette.has_value());
}

TEST(KMeans, EachPointOwnCluster) {
  Rng rng(2);
  auto p = random_points(rng, 6, 2);
  auto s = kmeans(p, 6, 7);
  EXPECT_EQ(s.wss, 0.0);
  std::vector<int> l = s.labels;
  std::sort(l.begin(), l.end());
  EXPECT_EQ(std::unique(l.begin(), l.end()) - l.begin(), 6);
}

TEST(KMeans, FourPointExample) {
  auto s = kmeans(four_points(), 2, 42);
  EXPECT_EQ(s.labels[0], s.labels[1]);
  EXPECT_EQ(s.labels[2], s.labels[3]);
  EXPECT_NE(s.labels[0], s.labels[2]);
  EXPECT_DOUBLE_EQ(s.wss, 1.0);
  const auto left = s.labels[0], right = s.labels[2];
  EXPECT_NEAR(s.centroids(left, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.centroids(left, 1), 0.5, 1e-15);
  EXPECT_NEAR(s.centroids(right, 0), 10.0, 1e-15);
  EXPECT_NEAR(s.centroids(right, 1), 0.5, 1e-15);
}

TEST(KMeans, Errors) {
  EXPECT_THROW(kmeans(four_points(), 5, 1), DataError);
  EXPECT_THROW(kmeans(four_points(), 0, 1), ConfigError);
  Eigen::MatrixXd bad = four_points();
  bad(0, 0) = NAN;
  EXPECT_THROW(kmeans(bad, 2, 1), DataError);
}

TEST(KMeans, RecoversBlobs) {
  Rng rng(77);
  std::vector<int> truth;
  auto p = blobs(rng, 25, truth);
  auto s = kmeans(p, 4, 42);
  EXPECT_EQ(adjusted_rand(s.labels, truth).value, 1.0);
}

TEST(KMeans, DeterministicAndBestOfRestarts) {
  Rng rng(3);
  auto p = random_points(rng, 40, 3);
  KMeansOptions o;
  o.n_init = 10;
  auto a = kmeans(p, 3, 99, o), b = kmeans(p, 3, 99, o);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.wss, b.wss);
  ASSERT_EQ(a.restart_wss.size(), 10u);
  for (double w : a.restart_wss) EXPECT_LE(a.wss, w);
  EXPECT_EQ(a.wss, a.restart_wss[static_cast<std::size_t>(a.best_restart)]);
  for (std::size_t r = 0; r < static_cast<std::size_t>(a.best_restart); ++r) EXPECT_GT(a.restart_wss[r], a.wss);
}

TEST(KMeans, ValidityIndicesAttached) {
  Rng rng(4);
  auto p = random_points(rng, 30, 2);
  auto s = kmeans(p, 3, 5);
  ASSERT_TRUE(s.silhouette && s.calinski_harabasz && s.davies_bouldin);
  EXPECT_NEAR(*s.silhouette, oracle_silhouette(p, s.labels), 1e-9);
  EXPECT_GE(*s.silhouette, -1.0);
  EXPECT_LE(*s.silhouette, 1.0);
  EXPECT_GE(*s.davies_bouldin, 0.0);
  EXPECT_NEAR(s.wss, within_ss(p, s.labels), 1e-12);
}

TEST(Elbow, FourPointGeometry) {
  std::vector<int> ks{1, 2, 3, 4};
  auto e = elbow_wss(four_points(), ks, 42);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_GT(e[0].wss, e[1].wss);
  EXPECT_DOUBLE_EQ(e[1].wss, 1.0);
  EXPECT_EQ(e[3].wss, 0.0);
}

TEST(Elbow, IdenticalPoints) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(5, 2, 0.3);
  std::vector<int> ks{1, 2, 3, 4, 5};
  for (const auto& pt : elbow_wss(p, ks, 1)) EXPECT_EQ(pt.wss, 0.0);
}

TEST(Elbow, NonIncreasingOverSeeds) {
  std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8};
  KMeansOptions o;
  o.n_init = 3;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 1000);
    auto p = random_points(rng, 25, 2);
    auto e = elbow_wss(p, ks, seed, o);
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LE(e[i].wss, e[i - 1].wss) << "seed " << seed;
  }
}

TEST(Validity, OneDimensionalExample) {
  Eigen::MatrixXd p(4, 1);
  p << 0, 0, 10, 10;
  std::vector<int> l{0, 0, 1, 1};
  EXPECT_EQ(silhouette(p, l), 1.0);
  EXPECT_EQ(davies_bouldin(p, l), 0.0);
  std::vector<int> one{0, 0, 0, 0};
  EXPECT_THROW(silhouette(p, one), DataError);
  EXPECT_THROW(calinski_harabasz(p, one), DataError);
  EXPECT_THROW(davies_bouldin(p, one), DataError);
}

TEST(Validity, MatchesDefinitionalOracles) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const int n = 8 + static_cast<int>(rng.below(10)), k = 2 + static_cast<int>(rng.below(3));
    auto p = random_points(rng, n, 3);
    std::vector<int> l(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) l[static_cast<std::size_t>(i)] = i < k ? i : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    EXPECT_NEAR(silhouette(p, l), oracle_silhouette(p, l), 1e-9);
    EXPECT_NEAR(calinski_harabasz(p, l), oracle_ch(p, l), 1e-9 * std::max(1.0, oracle_ch(p, l)));
    EXPECT_NEAR(davies_bouldin(p, l), oracle_db(p, l), 1e-9);
  }
}

TEST(Validity, SingletonContributesZero) {
  Eigen::MatrixXd p(3, 1);
  p << 0, 1, 5;
  std::vector<int> l{0, 0, 1};
  // Points 0 and 1: a = 1, b = 5 and 4.
  EXPECT_NEAR(silhouette(p, l), ((5.0 - 1.0) / 5.0 + (4.0 - 1.0) / 4.0 + 0.0) / 3.0, 1e-15);
}

TEST(Ari, Examples) {
  std::vector<int> a{0, 0, 1, 1}, b{1, 1, 0, 0}, c{0, 1, 0, 1};
  EXPECT_EQ(adjusted_rand(a, b).value, 1.0);
  EXPECT_EQ(adjusted_rand(a, a).value, 1.0);
  EXPECT_NEAR(adjusted_rand(a, c).value, -0.5, 1e-15);
  std::vector<int> z{0, 0, 0, 0};
  auto d = adjusted_rand(z, z);
  EXPECT_EQ(d.value, 1.0);
  EXPECT_TRUE(d.degenerate);
  EXPECT_FALSE(adjusted_rand(a, c).degenerate);
  std::vector<int> s{0, 1};
  EXPECT_THROW(adjusted_rand(a, s), DataError);
}

TEST(Ari, OracleSymmetryAndRelabeling) {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 6 + rng.below(20);
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = i < 3 ? static_cast<int>(i) : static_cast<int>(rng.below(3));
      b[i] = i < 4 ? static_cast<int>(i) : static_cast<int>(rng.below(4));
    }
    const double v = adjusted_rand(a, b).value;
    EXPECT_NEAR(v, oracle_ari(a, b), 1e-12);
    EXPECT_EQ(v, adjusted_rand(b, a).value);
    std::vector<int> pa(n);
    for (std::size_t i = 0; i < n; ++i) pa[i] = (a[i] + 1) % 3 + 10;
    EXPECT_NEAR(adjusted_rand(pa, b).value, v, 1e-15);
  }
}
