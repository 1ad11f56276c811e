#include "awpri/econ.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>

#include "awpri/distributions.hpp"
#include "awpri/errors.hpp"

namespace awpri {

namespace {

std::vector<int> compact_ids(std::span<const int> ids, int& count) {
  std::map<int, int> lookup;
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(lookup.try_emplace(id, static_cast<int>(lookup.size())).first->second);
  count = static_cast<int>(lookup.size());
  return out;
}

Eigen::MatrixXd group_means(const Eigen::MatrixXd& data, const std::vector<int>& ids, int groups) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(groups, data.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(groups);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    sums.row(ids[static_cast<std::size_t>(i)]) += data.row(i);
    counts(ids[static_cast<std::size_t>(i)]) += 1.0;
  }
  return sums.array().colwise() / counts.array();
}

void subtract_group_means(Eigen::MatrixXd& data, const std::vector<int>& ids, int groups) {
  const Eigen::MatrixXd means = group_means(data, ids, groups);
  for (Eigen::Index i = 0; i < data.rows(); ++i) data.row(i) -= means.row(ids[static_cast<std::size_t>(i)]);
}

std::vector<std::string> default_names(std::vector<std::string> names, Eigen::Index k) {
  if (names.empty()) {
    for (Eigen::Index j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(names.size()) != k) throw ConfigError("coefficient names do not match design columns");
  return names;
}

}  // namespace

std::string to_string(SeType s) {
  switch (s) {
    case SeType::classical: return "classical";
    case SeType::hc1: return "hc1";
    case SeType::cluster: return "cluster_by_entity";
  }
  return "?";
}

std::optional<Eigen::Index> RegressionFit::index_of(std::string_view name) const {
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return static_cast<Eigen::Index>(j);
  }
  return std::nullopt;
}

CoefficientRow RegressionFit::row(Eigen::Index j, double level) const {
  CoefficientRow r;
  r.name = names.at(static_cast<std::size_t>(j));
  r.estimate = coefficients(j);
  if (std::isnan(covariance(j, j))) {
    // Saturated fit: the estimate is exact but nothing is left for inference.
    r.se = r.t = r.p = r.ci_lo = r.ci_hi = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.se = std::sqrt(std::max(covariance(j, j), 0.0));
  if (r.se > 0.0) {
    r.t = r.estimate / r.se;
    r.p = dist::t_two_sided_p(r.t, inference_df);
  } else {
    r.t = r.estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.estimate);
    r.p = r.estimate == 0.0 ? 1.0 : 0.0;
  }
  const double crit = dist::t_quantile(0.5 + level / 2.0, inference_df);
  r.ci_lo = r.estimate - crit * r.se;
  r.ci_hi = r.estimate + crit * r.se;
  return r;
}

CoefficientRow RegressionFit::row(std::string_view name, double level) const {
  const auto j = index_of(name);
  if (!j) throw ConfigError("no coefficient named '" + std::string(name) + "'");
  return row(*j, level);
}

RegressionFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const OlsOptions& opts,
                  std::vector<std::string> names) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n) throw DataError("response length does not match design rows");
  if (!X.allFinite() || !y.allFinite()) throw DataError("regression inputs must be finite");
  RegressionFit fit;
  fit.names = default_names(std::move(names), k);
  fit.se_type = opts.se;
  fit.n = n;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  fit.rank = qr.rank();
  if (fit.rank < k) {
    std::string cols;
    for (Eigen::Index i = fit.rank; i < k; ++i) {
      if (!cols.empty()) cols += ", ";
      cols += fit.names[static_cast<std::size_t>(qr.colsPermutation().indices()(i))];
    }
    throw DataError("design matrix is rank deficient; dependent columns: " + cols);
  }
  fit.df_resid = static_cast<double>(n - k - opts.absorbed);
  if (fit.df_resid < 0.0 || (fit.df_resid == 0.0 && !opts.allow_saturated)) {
    throw DataError("regression has no residual degrees of freedom");
  }

  fit.coefficients = qr.solve(y);
  fit.residuals = y - X * fit.coefficients;
  const double ssr = fit.residuals.squaredNorm();
  const double sst = opts.centered_r2 ? (y.array() - y.mean()).matrix().squaredNorm() : y.squaredNorm();
  fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : (ssr == 0.0 ? 1.0 : 0.0);
  if (fit.df_resid == 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.sigma2 = nan;
    fit.covariance = Eigen::MatrixXd::Constant(k, k, nan);
    fit.inference_df = nan;
    return fit;
  }
  fit.sigma2 = ssr / fit.df_resid;

  const Eigen::MatrixXd rinv = qr.matrixR()
                                   .topLeftCorner(k, k)
                                   .triangularView<Eigen::Upper>()
                                   .solve(Eigen::MatrixXd::Identity(k, k));
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (rinv * rinv.transpose()) * perm.transpose();

  switch (opts.se) {
    case SeType::classical:
      fit.covariance = fit.sigma2 * bread;
      fit.inference_df = fit.df_resid;
      break;
    case SeType::hc1: {
      const Eigen::MatrixXd scores = X.array().colwise() * fit.residuals.array();
      fit.covariance = static_cast<double>(n) / fit.df_resid * bread * (scores.transpose() * scores) * bread;
      fit.inference_df = fit.df_resid;
      break;
    }
    case SeType::cluster: {
      if (static_cast<Eigen::Index>(opts.clusters.size()) != n) {
        throw ConfigError("cluster-robust errors need one cluster id per observation");
      }
      int g = 0;
      const auto ids = compact_ids(opts.clusters, g);
      if (g < 2) throw DataError("cluster-robust errors need at least two clusters");
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(g, k);
      for (Eigen::Index i = 0; i < n; ++i) sums.row(ids[static_cast<std::size_t>(i)]) += X.row(i) * fit.residuals(i);
      const double gg = static_cast<double>(g);
      const double factor = gg / (gg - 1.0) * static_cast<double>(n - 1) / fit.df_resid;
      fit.covariance = factor * bread * (sums.transpose() * sums) * bread;
      fit.n_clusters = static_cast<std::size_t>(g);
      fit.inference_df = opts.cluster_df == ClusterDf::g_minus_1 ? gg - 1.0 : std::numeric_limits<double>::infinity();
      break;
    }
  }
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose()).eval();
  return fit;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::vector<TrendRow> trend_slopes(const ScoreTable& scores, int outcome) {
  const Eigen::VectorXd y_all = scores.outcome(outcome);
  const int T = scores.n_years();
  std::vector<TrendRow> out;
  for (std::size_t i = 0; i < scores.n_countries(); ++i) {
    TrendRow r;
    r.country = scores.countries()[i];
    r.n = static_cast<std::size_t>(T);
    if (T < 3) {
      r.skipped = true;
      r.note = "fewer than 3 observations";
      out.push_back(std::move(r));
      continue;
    }
    Eigen::MatrixXd X(T, 2);
    const double mid = 0.5 * (scores.first_year() + scores.last_year());
    for (int t = 0; t < T; ++t) {
      X(t, 0) = 1.0;
      X(t, 1) = scores.first_year() + t - mid;
    }
    const Eigen::VectorXd y = y_all.segment(scores.row(i, scores.first_year()), T);
    if (y.maxCoeff() == y.minCoeff()) {
      // Flat series: zero slope with no residual variation.
      r.beta = r.se = r.ci_lo = r.ci_hi = 0.0;
      r.p = 1.0;
      out.push_back(std::move(r));
      continue;
    }
    const auto fit = ols(y, X, {}, {"const", "year"});
    const auto row = fit.row(1);
    r.beta = row.estimate;
    r.se = row.se;
    r.ci_lo = row.ci_lo;
    r.ci_hi = row.ci_hi;
    r.p = row.p;
    r.stars = significance_stars(r.p);
    out.push_back(std::move(r));
  }
  return out;
}

Eigen::MatrixXd within_transform(const Eigen::MatrixXd& data, std::span<const int> entity,
                                 std::span<const int> time, bool time_effects) {
  if (static_cast<Eigen::Index>(entity.size()) != data.rows()) throw DataError("entity ids do not match rows");
  int n_e = 0, n_t = 0;
  const auto e = compact_ids(entity, n_e);
  Eigen::MatrixXd out = data;
  if (!time_effects) {
    subtract_group_means(out, e, n_e);
    return out;
  }
  if (static_cast<Eigen::Index>(time.size()) != data.rows()) throw DataError("time ids do not match rows");
  const auto t = compact_ids(time, n_t);
  const double scale = 1.0 + (data.size() > 0 ? data.cwiseAbs().maxCoeff() : 0.0);
  // Alternating projections; one sweep suffices on a balanced panel.
  for (int iter = 0; iter < 100000; ++iter) {
    subtract_group_means(out, e, n_e);
    subtract_group_means(out, t, n_t);
    const Eigen::MatrixXd drift = group_means(out, e, n_e);
    if (drift.size() == 0 || drift.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
  }
  return out;
}

RegressionFit fe_within(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::span<const int> entity,
                        std::span<const int> time, const FeOptions& opts, std::vector<std::string> names) {
  const Eigen::Index n = X.rows();
  if (y.size() != n || static_cast<Eigen::Index>(entity.size()) != n) {
    throw DataError("fixed-effects inputs have inconsistent lengths");
  }
  if (opts.time_effects && static_cast<Eigen::Index>(time.size()) != n) {
    throw DataError("time ids do not match rows");
  }
  names = default_names(std::move(names), X.cols());
  int n_e = 0, n_t = 0;
  const auto e = compact_ids(entity, n_e);
  std::vector<int> t;
  if (opts.time_effects) t = compact_ids(time, n_t);

  auto constant_within = [&](const Eigen::VectorXd& col, const std::vector<int>& ids, int groups) {
    const Eigen::MatrixXd m = group_means(col, ids, groups);
    const double tol = 1e-12 * (1.0 + col.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i) - m(ids[static_cast<std::size_t>(i)], 0)) > tol) return false;
    }
    return true;
  };
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (constant_within(X.col(j), e, n_e)) {
      throw DataError("regressor '" + names[static_cast<std::size_t>(j)] +
                      "' is constant within entities and is absorbed by the entity fixed effects");
    }
    if (opts.time_effects && constant_within(X.col(j), t, n_t)) {
      throw DataError("regressor '" + names[static_cast<std::size_t>(j)] +
                      "' is constant within periods and is absorbed by the time fixed effects");
    }
  }

  Eigen::MatrixXd joined(n, X.cols() + 1);
  joined << y, X;
  const Eigen::MatrixXd w = within_transform(joined, entity, time, opts.time_effects);
  OlsOptions o;
  o.se = opts.se;
  o.absorbed = n_e + (opts.time_effects ? n_t - 1 : 0);
  if (opts.se == SeType::cluster) o.clusters.assign(entity.begin(), entity.end());
  return ols(w.col(0), w.rightCols(X.cols()), o, std::move(names));
}

Eigen::MatrixXd quasi_demean(const Eigen::MatrixXd& data, std::span<const int> entity, double theta) {
  int groups = 0;
  const auto ids = compact_ids(entity, groups);
  const Eigen::MatrixXd means = group_means(data, ids, groups);
  Eigen::MatrixXd out = data;
  for (Eigen::Index i = 0; i < data.rows(); ++i) out.row(i) -= theta * means.row(ids[static_cast<std::size_t>(i)]);
  return out;
}

ReFit re_gls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::span<const int> entity,
             std::vector<std::string> names) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  names = default_names(std::move(names), k);
  if (y.size() != n || static_cast<Eigen::Index>(entity.size()) != n) {
    throw DataError("random-effects inputs have inconsistent lengths");
  }
  int n_e = 0;
  const auto e = compact_ids(entity, n_e);
  std::vector<int> counts(static_cast<std::size_t>(n_e), 0);
  for (int id : e) ++counts[static_cast<std::size_t>(id)];
  if (std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end()) {
    throw DataError("random-effects estimator needs a balanced panel");
  }
  const double T = static_cast<double>(counts.front());

  ReFit out;
  const auto within = fe_within(y, X, entity, {}, {.time_effects = false}, names);
  out.sigma2_e = within.residuals.squaredNorm() / within.df_resid;

  Eigen::MatrixXd joined(n, k + 1);
  joined << y, X;
  const Eigen::MatrixXd means = group_means(joined, e, n_e);
  if (n_e - k - 1 <= 0) throw DataError("between regression needs more entities than regressors + 1");
  Eigen::MatrixXd xb(n_e, k + 1);
  xb << Eigen::VectorXd::Ones(n_e), means.rightCols(k);
  std::vector<std::string> between_names{"(intercept)"};
  between_names.insert(between_names.end(), names.begin(), names.end());
  RegressionFit between;
  try {
    between = ols(means.col(0), xb, {}, std::move(between_names));
  } catch (const DataError& err) {
    throw DataError(std::string("between regression on entity means: ") + err.what() +
                    " (regressors with identical entity means, such as a common trend, are not identified)");
  }
  const double sigma2_b = between.residuals.squaredNorm() / static_cast<double>(n_e - k - 1);
  out.sigma2_u = sigma2_b - out.sigma2_e / T;
  if (out.sigma2_u < 0.0) {
    out.sigma2_u = 0.0;
    out.sigma2_u_floored = true;
    out.warnings.push_back("negative entity variance component floored at 0; random effects reduce to pooled OLS");
  }
  const double denom = T * out.sigma2_u + out.sigma2_e;
  out.theta = denom > 0.0 ? 1.0 - std::sqrt(out.sigma2_e / denom) : 0.0;

  Eigen::MatrixXd z(n, k + 2);
  z << y, Eigen::VectorXd::Ones(n), X;
  const Eigen::MatrixXd zs = quasi_demean(z, entity, out.theta);
  std::vector<std::string> re_names{"(intercept)"};
  re_names.insert(re_names.end(), names.begin(), names.end());
  out.fit = ols(zs.col(0), zs.rightCols(k + 1), {}, std::move(re_names));
  return out;
}

HausmanResult hausman(const Eigen::VectorXd& diff, const Eigen::MatrixXd& vdiff) {
  if (vdiff.rows() != diff.size() || vdiff.cols() != diff.size() || diff.size() == 0) {
    throw DataError("Hausman test: coefficient and covariance dimensions differ");
  }
  HausmanResult res;
  res.df = static_cast<int>(diff.size());
  const Eigen::MatrixXd v = 0.5 * (vdiff + vdiff.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double tol = 1e-12 * std::max(lambda.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if (lambda.minCoeff() > tol) {
    res.statistic = diff.dot(v.llt().solve(diff));
  } else {
    res.pseudo_inverse = true;
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * diff;
    double h = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      if (std::abs(lambda(j)) > tol) h += proj(j) * proj(j) / lambda(j);
    }
    res.statistic = h;
  }
  res.p_value = dist::chi2_sf(res.statistic, res.df);
  return res;
}

HausmanResult hausman(const RegressionFit& fe, const RegressionFit& re) {
  const auto k = static_cast<Eigen::Index>(fe.names.size());
  Eigen::VectorXd d(k);
  Eigen::MatrixXd v(k, k);
  std::vector<Eigen::Index> idx;
  for (const auto& name : fe.names) {
    const auto j = re.index_of(name);
    if (!j) throw DataError("Hausman test: random-effects fit has no coefficient '" + name + "'");
    idx.push_back(*j);
  }
  for (Eigen::Index a = 0; a < k; ++a) {
    d(a) = fe.coefficients(a) - re.coefficients(idx[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) {
      v(a, b) = fe.covariance(a, b) - re.covariance(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
  }
  auto res = hausman(d, v);
  res.names = fe.names;
  return res;
}

}  // namespace awpri
