#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "awpri/errors.hpp"
#include "awpri/rng.hpp"
#include "awpri/sensitivity.hpp"

using namespace awpri;

namespace {

ScoreTable cross_section(const Eigen::MatrixX3d& layers) {
  std::vector<std::string> ids;
  for (Eigen::Index i = 0; i < layers.rows(); ++i) ids.push_back("c" + std::to_string(i));
  return ScoreTable(ids, 2022, 1, layers);
}

double oracle_rho_tie_free(const std::vector<double>& a, const std::vector<double>& b) {
  auto rank = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      r[i] = 1.0 + static_cast<double>(std::count_if(v.begin(), v.end(), [&](double x) { return x < v[i]; }));
    return r;
  };
  const auto ra = rank(a), rb = rank(b);
  double d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double n = static_cast<double>(a.size());
  return 1 - 6 * d2 / (n * (n * n - 1));
}

double oracle_ari(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, double> cell;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cell[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  auto c2 = [](double n) { return n * (n - 1) / 2; };
  double idx = 0, sa = 0, sb = 0;
  for (const auto& [k, v] : cell) idx += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double e = sa * sb / c2(static_cast<double>(a.size()));
  const double denom = (sa + sb) / 2 - e;
  return denom == 0 ? 1.0 : (idx - e) / denom;
}

}  // namespace

TEST(WeightGrid, NineteenTriples) {
  auto g = weight_grid(LayerWeights::equal(), 0.05, 0.10);
  EXPECT_EQ(g.size(), 19u);
  EXPECT_NE(std::find(g.begin(), g.end(), LayerWeights::equal()), g.end());
  for (const auto& w : g) {
    EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-12);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_GT(w[j], 0.0);
      EXPECT_LE(std::fabs(w[j] - 1.0 / 3.0), 0.10 + 1e-12);
    }
  }
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end(), [](const LayerWeights& a, const LayerWeights& b) { return a.values() < b.values(); }));
  const double t = 1.0 / 3.0;
  for (const auto& w : g)
    EXPECT_FALSE(std::fabs(w[0] - (t + 0.10)) < 1e-12 && std::fabs(w[1] - (t + 0.05)) < 1e-12);
}

TEST(WeightGrid, LatticeCountOracle) {
  // Offsets (a, b, -(a+b)) on the step lattice with every |offset| <= tol.
  for (double tol : {0.05, 0.10, 0.15, 0.20}) {
    const int r = static_cast<int>(std::lround(tol / 0.05));
    std::size_t count = 0;
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b) count += std::abs(a + b) <= r;
    EXPECT_EQ(weight_grid(LayerWeights::equal(), 0.05, tol).size(), count);
  }
}

TEST(WeightGrid, PositivityAndErrors) {
  auto g = weight_grid(LayerWeights(0.1, 0.45, 0.45), 0.05, 0.10);
  for (const auto& w : g) EXPECT_GT(w[0], 0.0);
  EXPECT_THROW(weight_grid(LayerWeights::equal(), 0.0, 0.1), ConfigError);
  EXPECT_THROW(weight_grid(LayerWeights::equal(), 0.05, 0.01), ConfigError);
}

TEST(Sensitivity, BaseOnlyGrid) {
  Rng rng(1);
  Eigen::MatrixX3d L(10, 3);
  for (Eigen::Index i = 0; i < L.size(); ++i) L(i) = rng.uniform();
  std::vector<LayerWeights> g{LayerWeights::equal()};
  auto r = sensitivity_report(cross_section(L), 2022, g);
  EXPECT_EQ(r.mean_rho, 1.0);
  EXPECT_EQ(r.mean_ari, 1.0);
  EXPECT_EQ(r.entries[0].rho, 1.0);
  EXPECT_EQ(r.entries[0].ari, 1.0);
}

TEST(Sensitivity, EqualLayersGiveUnitEverywhere) {
  Rng rng(2);
  Eigen::MatrixX3d L(25, 3);
  for (Eigen::Index i = 0; i < 25; ++i) L.row(i).setConstant(0.2 + 0.6 * rng.uniform());
  auto g = weight_grid(LayerWeights::equal(), 0.05, 0.10);
  auto r = sensitivity_report(cross_section(L), 2022, g);
  ASSERT_EQ(r.entries.size(), 19u);
  for (const auto& e : r.entries) {
    EXPECT_EQ(e.rho, 1.0);
    EXPECT_EQ(e.ari, 1.0);
  }
  EXPECT_EQ(r.min_rho, 1.0);
  EXPECT_EQ(r.min_ari, 1.0);
}

TEST(Sensitivity, MatchesDirectRecomputation) {
  Eigen::MatrixX3d L(8, 3);
  L << 0.62, 0.89, 0.88, 0.52, 0.64, 0.68, 0.40, 0.59, 0.77, 0.56, 0.49, 0.64, 0.28, 0.41, 0.65, 0.42,
      0.38, 0.52, 0.57, 0.26, 0.41, 0.35, 0.31, 0.26;
  auto g = weight_grid(LayerWeights::equal(), 0.05, 0.10);
  auto base = LayerWeights::equal();
  auto r = sensitivity_report(cross_section(L), 2022, g);
  std::vector<double> bs;
  std::vector<int> bt;
  for (int i = 0; i < 8; ++i) {
    bs.push_back(base[0] * L(i, 0) + base[1] * L(i, 1) + base[2] * L(i, 2));
    bt.push_back(static_cast<int>(assign_tier(bs.back())));
  }
  double sum_rho = 0;
  for (std::size_t e = 0; e < g.size(); ++e) {
    std::vector<double> ps;
    std::vector<int> pt;
    for (int i = 0; i < 8; ++i) {
      ps.push_back(g[e][0] * L(i, 0) + g[e][1] * L(i, 1) + g[e][2] * L(i, 2));
      pt.push_back(static_cast<int>(assign_tier(ps.back())));
    }
    EXPECT_TRUE(r.entries[e].weights == g[e]);
    EXPECT_NEAR(r.entries[e].rho, oracle_rho_tie_free(ps, bs), 1e-12);
    EXPECT_NEAR(r.entries[e].ari, oracle_ari(pt, bt), 1e-12);
    sum_rho += r.entries[e].rho;
  }
  EXPECT_NEAR(r.mean_rho, sum_rho / 19.0, 1e-15);
  EXPECT_LT(r.min_rho, 1.0);
}

TEST(Sensitivity, DeterministicAndKmeansSource) {
  Rng rng(3);
  Eigen::MatrixX3d L(25, 3);
  for (Eigen::Index i = 0; i < L.size(); ++i) L(i) = rng.uniform();
  auto g = weight_grid(LayerWeights::equal(), 0.05, 0.10);
  auto a = sensitivity_report(cross_section(L), 2022, g), b = sensitivity_report(cross_section(L), 2022, g);
  for (std::size_t e = 0; e < g.size(); ++e) {
    EXPECT_EQ(a.entries[e].rho, b.entries[e].rho);
    EXPECT_EQ(a.entries[e].ari, b.entries[e].ari);
  }
  SensitivityOptions km;
  km.tiers = TierSource::kmeans;
  km.n_init = 10;
  auto k = sensitivity_report(cross_section(L), 2022, g, LayerWeights::equal(), km);
  const auto base = std::find_if(k.entries.begin(), k.entries.end(), [](const auto& e) { return e.weights == LayerWeights::equal(); });
  ASSERT_NE(base, k.entries.end());
  EXPECT_EQ(base->rho, 1.0);
  EXPECT_EQ(base->ari, 1.0);
  EXPECT_THROW(sensitivity_report(cross_section(L), 2021, g), DataError);
}
