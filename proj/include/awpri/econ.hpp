#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awpri/index.hpp"

namespace awpri {

enum class SeType { classical, hc1, cluster };

std::string to_string(SeType s);

struct CoefficientRow {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct RegressionFit {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  SeType se_type = SeType::classical;
  Eigen::Index n = 0;
  Eigen::Index rank = 0;
  /// n - rank - absorbed fixed effects.
  double df_resid = 0.0;
  /// Degrees of freedom for coefficient t tests; infinity means normal.
  double inference_df = 0.0;
  std::size_t n_clusters = 0;
  double r_squared = 0.0;
  double sigma2 = 0.0;
  Eigen::VectorXd residuals;

  Eigen::VectorXd std_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }
  std::optional<Eigen::Index> index_of(std::string_view name) const;
  CoefficientRow row(Eigen::Index j, double level = 0.95) const;
  CoefficientRow row(std::string_view name, double level = 0.95) const;
};

enum class ClusterDf { g_minus_1, normal };

struct OlsOptions {
  SeType se = SeType::classical;
  std::vector<int> clusters;  // one id per observation when se == cluster
  ClusterDf cluster_df = ClusterDf::g_minus_1;
  /// Parameters swept out before the regression (within transformations).
  Eigen::Index absorbed = 0;
  /// Centred R^2 when the design spans a constant; otherwise uncentred.
  bool centered_r2 = true;
  /// Accept df_resid == 0; the covariance is then NaN.
  bool allow_saturated = false;
};

/// Least squares via column-pivoted QR. Rank deficiency is a DataError that
/// names the dependent columns.
RegressionFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const OlsOptions& opts = {},
                  std::vector<std::string> names = {});

struct TrendRow {
  std::string country;
  bool skipped = false;
  std::string note;
  std::size_t n = 0;
  double beta = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double p = 1.0;
  std::string stars;
};

std::string significance_stars(double p);

/// Per-country OLS of the outcome on calendar year (classical SEs).
std::vector<TrendRow> trend_slopes(const ScoreTable& scores, int outcome = 0);

struct FeOptions {
  bool time_effects = true;
  SeType se = SeType::classical;
};

/// Two-way (or entity-only) within estimator. Equivalent to least squares with
/// a full set of entity and time dummies.
RegressionFit fe_within(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                        std::span<const int> entity, std::span<const int> time,
                        const FeOptions& opts = {}, std::vector<std::string> names = {});

/// Sweeps entity (and optionally time) means out of every column of `data`.
Eigen::MatrixXd within_transform(const Eigen::MatrixXd& data, std::span<const int> entity,
                                 std::span<const int> time, bool time_effects);

struct ReFit {
  RegressionFit fit;  // first coefficient is the intercept
  double sigma2_e = 0.0;
  double sigma2_u = 0.0;
  double theta = 0.0;
  bool sigma2_u_floored = false;
  std::vector<std::string> warnings;
};

/// Random-effects GLS with Swamy-Arora variance components on a balanced
/// panel. X excludes the constant.
ReFit re_gls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::span<const int> entity,
             std::vector<std::string> names = {});

/// y - theta * entity mean, per column; the constant column becomes 1 - theta.
Eigen::MatrixXd quasi_demean(const Eigen::MatrixXd& data, std::span<const int> entity, double theta);

struct HausmanResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  /// V_FE - V_RE was not positive definite; a pseudo-inverse was used.
  bool pseudo_inverse = false;
  std::vector<std::string> names;
};

HausmanResult hausman(const Eigen::VectorXd& diff, const Eigen::MatrixXd& vdiff);
/// Compares the coefficients of `fe` with the identically named ones in `re`.
HausmanResult hausman(const RegressionFit& fe, const RegressionFit& re);

struct DidSpec {
  std::vector<std::string> treated;
  int pre_first = 2004;
  int pre_last = 2016;
  int post_first = 2019;
  int post_last = 2022;
  std::vector<int> excluded{2017, 2018};
  int outcome = 0;  // 0 = awpri, 1..3 = L1..L3
};

struct DidResult {
  double att = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double treated_pre = 0.0;
  double treated_post = 0.0;
  double control_pre = 0.0;
  double control_post = 0.0;
  double raw_did = 0.0;
  std::vector<std::string> treated;
  std::vector<std::string> control;
  DidSpec spec;
  std::vector<int> years_used;
  Eigen::Index n_obs = 0;
  RegressionFit fit;
};

double raw_did(double treated_pre, double treated_post, double control_pre, double control_post);

/// Two-way fixed-effects DiD: outcome on Post x Treat with country and year
/// dummies (first of each dropped), CR1 errors clustered by country.
DidResult did(const ScoreTable& scores, const DidSpec& spec);

struct PretrendResult {
  double beta = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;
  Eigen::Index n_obs = 0;
  RegressionFit fit;
};

/// Pre-period outcome on centred year, year x treat and country dummies with
/// HC1 errors; reports the interaction.
PretrendResult pretrend_test(const ScoreTable& scores, const std::vector<std::string>& treated,
                             int pre_first, int pre_last, int outcome = 0);

/// Countries whose value of `code` in `year` is at least `threshold`.
std::vector<std::string> treated_by_rule(const PanelDataset& ds, const std::string& code, int year,
                                         double threshold);

}  // namespace awpri
