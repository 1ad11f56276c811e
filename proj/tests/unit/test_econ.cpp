#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "awpri/distributions.hpp"
#include "awpri/econ.hpp"
#include "awpri/errors.hpp"
#include "awpri/rng.hpp"

#include "../support/oracles.hpp"

using namespace awpri;
using namespace awpri::oracles;

TEST(Ols, ExactLinear) {
  Eigen::MatrixXd X(5, 2);
  X << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4;
  Eigen::VectorXd y = 0.5 * X.col(0) + 2.0 * X.col(1);
  auto f = ols(y, X);
  EXPECT_NEAR(f.coefficients(0), 0.5, 1e-12);
  EXPECT_NEAR(f.coefficients(1), 2.0, 1e-12);
  EXPECT_LT(f.residuals.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(f.std_errors().maxCoeff(), 1e-7);
  EXPECT_EQ(f.df_resid, 3.0);
}

TEST(Ols, MatchesCramerSolution) {
  Eigen::MatrixXd X(4, 2);
  X << 1, 2, 1, 3, 1, 5, 1, 7;
  Eigen::VectorXd y(4);
  y << 1.0, 2.5, 2.9, 4.4;
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (int i = 0; i < 4; ++i) {
    sx += X(i, 1);
    sxx += X(i, 1) * X(i, 1);
    sy += y(i);
    sxy += X(i, 1) * y(i);
  }
  const double det = 4 * sxx - sx * sx;
  const double b0 = (sy * sxx - sx * sxy) / det, b1 = (4 * sxy - sx * sy) / det;
  auto f = ols(y, X);
  EXPECT_NEAR(f.coefficients(0), b0, 1e-10);
  EXPECT_NEAR(f.coefficients(1), b1, 1e-10);
  const double s2 = f.residuals.squaredNorm() / 2.0;
  EXPECT_NEAR(f.covariance(1, 1), s2 * 4 / det, 1e-12);
  const auto row = f.row(1);
  EXPECT_NEAR(row.p, dist::t_two_sided_p(b1 / std::sqrt(s2 * 4 / det), 2.0), 1e-12);
}

TEST(Ols, Hc1MatchesExplicitSandwich) {
  Rng rng(3);
  Eigen::MatrixXd X(30, 3);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    X(i, 0) = 1;
    X(i, 1) = rng.normal();
    X(i, 2) = rng.uniform();
    y(i) = 1 + X(i, 1) - X(i, 2) + rng.normal(0, 0.2 + std::fabs(X(i, 1)));
  }
  OlsOptions o;
  o.se = SeType::hc1;
  auto f = ols(y, X, o);
  const Eigen::MatrixXd inv = (X.transpose() * X).inverse();
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 30; ++i) meat += f.residuals(i) * f.residuals(i) * X.row(i).transpose() * X.row(i);
  const Eigen::MatrixXd v = 30.0 / 27.0 * inv * meat * inv;
  EXPECT_LT((f.covariance - v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ols, SingletonClustersEqualHc1) {
  Rng rng(4);
  Eigen::MatrixXd X(20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    X(i, 0) = 1;
    X(i, 1) = rng.normal();
    y(i) = X(i, 1) + rng.normal(0, 1 + std::fabs(X(i, 1)));
  }
  OlsOptions hc;
  hc.se = SeType::hc1;
  OlsOptions cl;
  cl.se = SeType::cluster;
  for (int i = 0; i < 20; ++i) cl.clusters.push_back(i);
  auto a = ols(y, X, hc), b = ols(y, X, cl);
  // CR1 factor G/(G-1) * (n-1)/(n-k) equals n/(n-k) when G = n.
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(b.covariance(j, j) / a.covariance(j, j), 1.0, 1e-12);
  EXPECT_EQ(b.n_clusters, 20u);
  EXPECT_EQ(b.inference_df, 19.0);
}

TEST(Ols, ClusterRelabelingAndPsd) {
  Rng rng(5);
  Eigen::MatrixXd X(40, 3);
  Eigen::VectorXd y(40);
  OlsOptions a, b;
  a.se = b.se = SeType::cluster;
  for (int i = 0; i < 40; ++i) {
    X.row(i) << 1, rng.normal(), rng.normal();
    y(i) = rng.normal();
    a.clusters.push_back(i / 5);
    b.clusters.push_back(1000 - 7 * (i / 5));
  }
  auto fa = ols(y, X, a), fb = ols(y, X, b);
  EXPECT_LT((fa.covariance - fb.covariance).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((fa.covariance - fa.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fa.covariance);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
  OlsOptions missing;
  missing.se = SeType::cluster;
  EXPECT_THROW(ols(y, X, missing), ConfigError);
}

TEST(Ols, RankDeficiencyNamesColumn) {
  Eigen::MatrixXd X(5, 3);
  X << 1, 1, 2, 1, 2, 4, 1, 3, 6, 1, 4, 8, 1, 5, 10;
  Eigen::VectorXd y(5);
  y << 1, 2, 3, 4, 6;
  try {
    ols(y, X, {}, {"const", "x", "twice_x"});
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_TRUE(msg.find("twice_x") != std::string::npos || msg.find("x") != std::string::npos) << msg;
  }
  Eigen::MatrixXd square = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(ols(Eigen::VectorXd::Ones(2), square), DataError);
}

TEST(Ols, SaturatedFitHasNoInference) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 3, 4;
  OlsOptions o;
  o.allow_saturated = true;
  auto f = ols(y, X, o);
  EXPECT_EQ(f.coefficients(1), 4.0);
  EXPECT_TRUE(std::isnan(f.row(1).se));
  EXPECT_TRUE(std::isnan(f.row(1).p));
}

TEST(Trend, ExactAndConstantSeries) {
  std::ostringstream csv;
  csv << "country,year,L1,L2,L3\n";
  for (int y = 2004; y <= 2022; ++y) {
    const double v = 0.3 + 0.005 * (y - 2004);
    csv << "A," << y << ',' << v << ',' << v << ',' << v << '\n';
  }
  for (int y = 2004; y <= 2022; ++y) csv << "B," << y << ",0.4,0.4,0.4\n";
  std::istringstream in(csv.str());
  auto rows = trend_slopes(read_layer_table(in), 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].beta, 0.005, 1e-12);
  EXPECT_LT(rows[0].p, 1e-10);
  EXPECT_EQ(rows[0].stars, "***");
  EXPECT_NEAR(rows[1].beta, 0.0, 1e-15);
  EXPECT_EQ(rows[1].p, 1.0);
  EXPECT_EQ(rows[1].stars, "");
}

TEST(Trend, NoisyMatchesGenericOls) {
  Rng rng(6);
  std::ostringstream csv;
  csv << "country,year,L1,L2,L3\n";
  std::vector<double> ys;
  for (int y = 2004; y <= 2022; ++y) {
    const double v = 0.5 + 0.003 * (y - 2004) + rng.normal(0, 0.01);
    ys.push_back(v);
    csv << "A," << y << ',' << v << ',' << v << ',' << v << '\n';
  }
  std::istringstream in(csv.str());
  auto st = read_layer_table(in);
  auto rows = trend_slopes(st, 2);
  Eigen::MatrixXd X(19, 2);
  for (int t = 0; t < 19; ++t) X.row(t) << 1.0, 2004.0 + t;
  auto f = ols(st.outcome(2), X);
  EXPECT_NEAR(rows[0].beta, f.coefficients(1), 1e-12);
  EXPECT_NEAR(rows[0].se, f.std_errors()(1), 1e-12);
  EXPECT_NEAR(rows[0].p, f.row(1).p, 1e-10);
  EXPECT_EQ(significance_stars(0.04), "*");
  EXPECT_EQ(significance_stars(0.009), "**");
  EXPECT_EQ(significance_stars(0.05), "");
}

TEST(Trend, ShortSeriesSkipped) {
  std::istringstream in("country,year,L1,L2,L3\nA,2020,0.1,0.1,0.1\nA,2021,0.2,0.2,0.2\n");
  auto rows = trend_slopes(read_layer_table(in));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].skipped);
  EXPECT_FALSE(rows[0].note.empty());
}

TEST(FixedEffects, NoiseFreeSlope) {
  std::vector<int> e, t;
  Eigen::VectorXd y(12);
  Eigen::MatrixXd X(12, 1);
  Rng rng(1);
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 4; ++s) {
      const int r = i * 4 + s;
      X(r, 0) = rng.normal();
      y(r) = 10.0 * i + 2.0 * X(r, 0);
      e.push_back(i);
      t.push_back(s);
    }
  FeOptions one_way;
  one_way.time_effects = false;
  EXPECT_NEAR(fe_within(y, X, e, t, one_way).coefficients(0), 2.0, 1e-12);
  EXPECT_NEAR(fe_within(y, X, e, t).coefficients(0), 2.0, 1e-12);
}

TEST(FixedEffects, EqualsLsdvOnRandomPanels) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_e = 3 + static_cast<int>(rng.below(6)), n_t = 3 + static_cast<int>(rng.below(5));
    const int k = 1 + static_cast<int>(rng.below(3));
    auto p = random_panel(rng, n_e, n_t, k, trial % 2 ? 0.25 : 0.0);
    Eigen::VectorXd se_oracle;
    const auto b = lsdv(p, true, &se_oracle);
    auto f = fe_within(p.y, p.X, p.entity, p.time);
    for (int j = 0; j < k; ++j) {
      EXPECT_NEAR(f.coefficients(j), b(j), 1e-8) << "trial " << trial;
      EXPECT_NEAR(f.std_errors()(j), se_oracle(j), 1e-8) << "trial " << trial;
    }
    FeOptions one_way;
    one_way.time_effects = false;
    const auto b1 = lsdv(p, false);
    auto f1 = fe_within(p.y, p.X, p.entity, p.time, one_way);
    for (int j = 0; j < k; ++j) EXPECT_NEAR(f1.coefficients(j), b1(j), 1e-8);
  }
}

TEST(FixedEffects, AbsorbedRegressor) {
  Rng rng(7);
  auto p = random_panel(rng, 4, 5, 2, 0.0);
  for (Eigen::Index r = 0; r < p.X.rows(); ++r) p.X(r, 1) = p.entity[static_cast<std::size_t>(r)] * 1.5;
  try {
    fe_within(p.y, p.X, p.entity, p.time, {}, {"x", "treat"});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("absorbed"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("treat"), std::string::npos);
  }
  for (Eigen::Index r = 0; r < p.X.rows(); ++r) p.X(r, 1) = p.time[static_cast<std::size_t>(r)] * 0.1;
  EXPECT_THROW(fe_within(p.y, p.X, p.entity, p.time), DataError);
}

TEST(RandomEffects, QuasiDemeanTwoByTwo) {
  // Entity 0: rows (1, 3); entity 1: rows (5, 9). Means 2 and 7.
  Eigen::MatrixXd d(4, 2);
  d << 1, 1, 3, 1, 5, 1, 9, 1;
  std::vector<int> e{0, 0, 1, 1};
  auto q = quasi_demean(d, e, 0.25);
  EXPECT_DOUBLE_EQ(q(0, 0), 1 - 0.25 * 2);
  EXPECT_DOUBLE_EQ(q(1, 0), 3 - 0.25 * 2);
  EXPECT_DOUBLE_EQ(q(2, 0), 5 - 0.25 * 7);
  EXPECT_DOUBLE_EQ(q(3, 0), 9 - 0.25 * 7);
  for (int r = 0; r < 4; ++r) EXPECT_DOUBLE_EQ(q(r, 1), 0.75);
}

TEST(RandomEffects, SwamyAroraByHand) {
  // Three entities, two periods, one regressor.
  const double x[3][2] = {{1.0, 2.0}, {2.0, 4.5}, {0.5, 3.0}};
  const double y[3][2] = {{2.1, 3.9}, {5.0, 9.4}, {1.2, 6.3}};
  Eigen::VectorXd yy(6);
  Eigen::MatrixXd xx(6, 1);
  std::vector<int> ent;
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < 2; ++t) {
      yy(i * 2 + t) = y[i][t];
      xx(i * 2 + t, 0) = x[i][t];
      ent.push_back(i);
    }
  // Within: slope from entity-demeaned data; df = 6 - 3 - 1.
  double xm[3], ym[3], sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    xm[i] = (x[i][0] + x[i][1]) / 2;
    ym[i] = (y[i][0] + y[i][1]) / 2;
    for (int t = 0; t < 2; ++t) {
      sxy += (x[i][t] - xm[i]) * (y[i][t] - ym[i]);
      sxx += (x[i][t] - xm[i]) * (x[i][t] - xm[i]);
    }
  }
  const double bw = sxy / sxx;
  double ssr_w = 0;
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < 2; ++t) {
      const double r = (y[i][t] - ym[i]) - bw * (x[i][t] - xm[i]);
      ssr_w += r * r;
    }
  const double s2e = ssr_w / 2.0;
  // Between: ym on (1, xm); df = 3 - 1 - 1.
  const double mx = (xm[0] + xm[1] + xm[2]) / 3, my = (ym[0] + ym[1] + ym[2]) / 3;
  double bxy = 0, bxx = 0;
  for (int i = 0; i < 3; ++i) {
    bxy += (xm[i] - mx) * (ym[i] - my);
    bxx += (xm[i] - mx) * (xm[i] - mx);
  }
  const double bb = bxy / bxx;
  double ssr_b = 0;
  for (int i = 0; i < 3; ++i) {
    const double r = ym[i] - my - bb * (xm[i] - mx);
    ssr_b += r * r;
  }
  const double s2u = std::max(ssr_b / 1.0 - s2e / 2.0, 0.0);
  const double theta = 1 - std::sqrt(s2e / (2 * s2u + s2e));
  // GLS on quasi-demeaned data, 2x2 normal equations by Cramer's rule.
  double a11 = 0, a12 = 0, a22 = 0, c1 = 0, c2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < 2; ++t) {
      const double z1 = 1 - theta, z2 = x[i][t] - theta * xm[i], w = y[i][t] - theta * ym[i];
      a11 += z1 * z1;
      a12 += z1 * z2;
      a22 += z2 * z2;
      c1 += z1 * w;
      c2 += z2 * w;
    }
  const double det = a11 * a22 - a12 * a12;
  const double b0 = (c1 * a22 - a12 * c2) / det, b1 = (a11 * c2 - a12 * c1) / det;

  auto re = re_gls(yy, xx, ent, {"x"});
  EXPECT_NEAR(re.sigma2_e, s2e, 1e-12);
  EXPECT_NEAR(re.sigma2_u, s2u, 1e-12);
  EXPECT_NEAR(re.theta, theta, 1e-12);
  EXPECT_NEAR(re.fit.coefficients(0), b0, 1e-10);
  EXPECT_NEAR(re.fit.coefficients(1), b1, 1e-10);
  EXPECT_EQ(re.fit.names[0], "(intercept)");
}

TEST(RandomEffects, NoEntityEffectsApproachesPooled) {
  Rng rng(8);
  auto p = random_panel(rng, 60, 5, 1, 0.0, 0.0);
  // Without time dummies in the truth the pooled model is misspecified only
  // through the year effects, which are shared; compare slopes.
  auto re = re_gls(p.y, p.X, p.entity);
  Eigen::MatrixXd Xc(p.X.rows(), 2);
  Xc << Eigen::VectorXd::Ones(p.X.rows()), p.X;
  auto pooled = ols(p.y, Xc);
  EXPECT_LT(re.theta, 0.3);
  EXPECT_NEAR(re.fit.coefficients(1), pooled.coefficients(1), 0.05);
}

TEST(RandomEffects, FlooredVarianceIsPooledOls) {
  // Entity means identical in y and x: between residuals vanish.
  Eigen::VectorXd y(6);
  Eigen::MatrixXd X(6, 1);
  y << 1, 3, 2, 2, 3, 1;
  X << 0, 2, 1, 1, 2, 0.5;
  std::vector<int> e{0, 0, 1, 1, 2, 2};
  auto re = re_gls(y, X, e);
  ASSERT_TRUE(re.sigma2_u_floored);
  EXPECT_EQ(re.theta, 0.0);
  EXPECT_FALSE(re.warnings.empty());
  Eigen::MatrixXd Xc(6, 2);
  Xc << Eigen::VectorXd::Ones(6), X;
  EXPECT_LT((re.fit.coefficients - ols(y, Xc).coefficients).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomEffects, LargeEffectsApproachFixedEffects) {
  Rng rng(9);
  auto p = random_panel(rng, 30, 60, 2, 0.0, 20.0, 0.0);
  auto re = re_gls(p.y, p.X, p.entity);
  FeOptions one_way;
  one_way.time_effects = false;
  auto fe = fe_within(p.y, p.X, p.entity, p.time, one_way);
  EXPECT_GT(re.theta, 0.99);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(re.fit.coefficients(j + 1), fe.coefficients(j), 2e-3);
}

TEST(RandomEffects, RejectsUnbalancedPanel) {
  Eigen::VectorXd y(5);
  y << 1, 2, 3, 4, 5;
  Eigen::MatrixXd X(5, 1);
  X << 1, 0, 2, 1, 3;
  std::vector<int> e{0, 0, 1, 1, 1};
  EXPECT_THROW(re_gls(y, X, e), DataError);
}

TEST(Hausman, EqualCoefficients) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(3, 3);
  auto h = hausman(d, v);
  EXPECT_EQ(h.statistic, 0.0);
  EXPECT_EQ(h.p_value, 1.0);
  EXPECT_EQ(h.df, 3);
  EXPECT_THROW(hausman(Eigen::VectorXd::Zero(2), v), DataError);
}

TEST(Hausman, ChiSquareThreeDf) {
  // Diagonal difference covariance chosen so that H = 2.55.
  Eigen::VectorXd d(3);
  d << 1.0, 1.0, std::sqrt(0.55);
  auto h = hausman(d, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_NEAR(h.statistic, 2.55, 1e-12);
  const double closed = std::erfc(std::sqrt(2.55 / 2)) + std::sqrt(2 * 2.55 / M_PI) * std::exp(-2.55 / 2);
  EXPECT_NEAR(h.p_value, closed, 1e-12);
  EXPECT_NEAR(h.p_value, 0.466, 0.001);
  EXPECT_FALSE(h.pseudo_inverse);
}

TEST(Hausman, SingularDifferenceFlagged) {
  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  Eigen::MatrixXd v(2, 2);
  v << 1, 0, 0, 0;
  auto h = hausman(d, v);
  EXPECT_TRUE(h.pseudo_inverse);
  EXPECT_NEAR(h.statistic, 1.0, 1e-12);
  EXPECT_GE(h.statistic, 0.0);
}

TEST(Hausman, CorrelatedEffectsRejectOnAverage) {
  double mean_p = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(500 + static_cast<std::uint64_t>(s));
    const int n_e = 30, n_t = 8;
    Eigen::VectorXd y(n_e * n_t);
    Eigen::MatrixXd X(n_e * n_t, 1);
    std::vector<int> e, t;
    for (int i = 0; i < n_e; ++i) {
      const double u = rng.normal();
      for (int j = 0; j < n_t; ++j) {
        const int r = i * n_t + j;
        X(r, 0) = u + rng.normal(0, 0.5);
        y(r) = 1.0 * X(r, 0) + u + rng.normal(0, 0.5);
        e.push_back(i);
        t.push_back(j);
      }
    }
    FeOptions one_way;
    one_way.time_effects = false;
    auto fe = fe_within(y, X, e, t, one_way, {"x"});
    auto re = re_gls(y, X, e, {"x"});
    auto h = hausman(fe, re.fit);
    EXPECT_EQ(h.df, 1);
    mean_p += h.p_value / seeds;
  }
  EXPECT_LT(mean_p, 0.05);
}
