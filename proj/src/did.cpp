#include <algorithm>
#include <cmath>
#include <set>

#include "awpri/econ.hpp"
#include "awpri/errors.hpp"

namespace awpri {

namespace {

std::vector<bool> treated_mask(const ScoreTable& scores, const std::vector<std::string>& treated) {
  std::vector<bool> mask(scores.n_countries(), false);
  for (const auto& id : treated) {
    const auto i = scores.country_index(id);
    if (!i) throw ConfigError("treated country '" + id + "' is not in the panel");
    mask[*i] = true;
  }
  return mask;
}

void check_window(const ScoreTable& scores, int first, int last, const char* what) {
  if (first > last) throw ConfigError(std::string(what) + " window is empty");
  if (first < scores.first_year() || last > scores.last_year()) {
    throw ConfigError(std::string(what) + " window " + std::to_string(first) + "-" + std::to_string(last) +
                      " lies outside the panel years");
  }
}

}  // namespace

double raw_did(double treated_pre, double treated_post, double control_pre, double control_post) {
  return (treated_post - treated_pre) - (control_post - control_pre);
}

DidResult did(const ScoreTable& scores, const DidSpec& spec) {
  check_window(scores, spec.pre_first, spec.pre_last, "pre");
  check_window(scores, spec.post_first, spec.post_last, "post");
  if (!(spec.pre_last < spec.post_first || spec.post_last < spec.pre_first)) {
    throw ConfigError("pre and post windows overlap");
  }
  const auto mask = treated_mask(scores, spec.treated);
  DidResult res;
  res.spec = spec;
  for (std::size_t i = 0; i < scores.n_countries(); ++i) {
    (mask[i] ? res.treated : res.control).push_back(scores.countries()[i]);
  }
  if (res.treated.empty() || res.control.empty()) throw ConfigError("DiD needs both treated and control countries");

  const std::set<int> excluded(spec.excluded.begin(), spec.excluded.end());
  auto in_pre = [&](int y) { return y >= spec.pre_first && y <= spec.pre_last; };
  auto in_post = [&](int y) { return y >= spec.post_first && y <= spec.post_last; };
  for (int y = scores.first_year(); y <= scores.last_year(); ++y) {
    if ((in_pre(y) || in_post(y)) && !excluded.count(y)) res.years_used.push_back(y);
  }
  const bool any_pre = std::any_of(res.years_used.begin(), res.years_used.end(), in_pre);
  const bool any_post = std::any_of(res.years_used.begin(), res.years_used.end(), in_post);
  if (!any_pre || !any_post) {
    throw DataError("every country needs pre and post observations; the windows leave none after exclusions");
  }

  const Eigen::VectorXd outcome = scores.outcome(spec.outcome);
  const auto n_c = static_cast<Eigen::Index>(scores.n_countries());
  const auto n_y = static_cast<Eigen::Index>(res.years_used.size());
  const Eigen::Index n = n_c * n_y;
  // const, country dummies 1.., year dummies 1.., post x treat
  const Eigen::Index k = 1 + (n_c - 1) + (n_y - 1) + 1;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd y(n);
  std::vector<int> clusters(static_cast<std::size_t>(n));
  double sums[2][2] = {{0, 0}, {0, 0}};
  double counts[2][2] = {{0, 0}, {0, 0}};
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n_c; ++i) {
    const bool treat = mask[static_cast<std::size_t>(i)];
    for (Eigen::Index t = 0; t < n_y; ++t, ++r) {
      const int year = res.years_used[static_cast<std::size_t>(t)];
      const bool post = in_post(year);
      y(r) = outcome(scores.row(static_cast<std::size_t>(i), year));
      X(r, 0) = 1.0;
      if (i > 0) X(r, i) = 1.0;
      if (t > 0) X(r, n_c - 1 + t) = 1.0;
      X(r, k - 1) = (post && treat) ? 1.0 : 0.0;
      clusters[static_cast<std::size_t>(r)] = static_cast<int>(i);
      sums[treat][post] += y(r);
      counts[treat][post] += 1.0;
    }
  }
  res.treated_pre = sums[1][0] / counts[1][0];
  res.treated_post = sums[1][1] / counts[1][1];
  res.control_pre = sums[0][0] / counts[0][0];
  res.control_post = sums[0][1] / counts[0][1];
  res.raw_did = raw_did(res.treated_pre, res.treated_post, res.control_pre, res.control_post);

  std::vector<std::string> names{"const"};
  for (Eigen::Index i = 1; i < n_c; ++i) names.push_back("country:" + scores.countries()[static_cast<std::size_t>(i)]);
  for (Eigen::Index t = 1; t < n_y; ++t) names.push_back("year:" + std::to_string(res.years_used[static_cast<std::size_t>(t)]));
  names.push_back("post_x_treat");
  OlsOptions opts;
  opts.se = SeType::cluster;
  opts.clusters = std::move(clusters);
  opts.allow_saturated = true;
  res.fit = ols(y, X, opts, std::move(names));
  const auto row = res.fit.row(k - 1);
  res.att = row.estimate;
  res.se = row.se;
  res.t = row.t;
  res.p = row.p;
  res.ci_lo = row.ci_lo;
  res.ci_hi = row.ci_hi;
  res.n_obs = n;
  return res;
}

PretrendResult pretrend_test(const ScoreTable& scores, const std::vector<std::string>& treated, int pre_first,
                             int pre_last, int outcome) {
  check_window(scores, pre_first, pre_last, "pre");
  if (pre_last - pre_first + 1 < 2) throw ConfigError("pre-trend test needs at least two pre-period years");
  const auto mask = treated_mask(scores, treated);
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }) ||
      std::all_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    throw ConfigError("pre-trend test needs both treated and control countries");
  }
  const Eigen::VectorXd out = scores.outcome(outcome);
  const auto n_c = static_cast<Eigen::Index>(scores.n_countries());
  const Eigen::Index n_y = pre_last - pre_first + 1;
  const Eigen::Index n = n_c * n_y;
  const Eigen::Index k = 1 + (n_c - 1) + 2;
  const double mid = 0.5 * (pre_first + pre_last);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd y(n);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n_c; ++i) {
    for (int year = pre_first; year <= pre_last; ++year, ++r) {
      const double trend = year - mid;
      y(r) = out(scores.row(static_cast<std::size_t>(i), year));
      X(r, 0) = 1.0;
      if (i > 0) X(r, i) = 1.0;
      X(r, k - 2) = trend;
      X(r, k - 1) = mask[static_cast<std::size_t>(i)] ? trend : 0.0;
    }
  }
  std::vector<std::string> names{"const"};
  for (Eigen::Index i = 1; i < n_c; ++i) names.push_back("country:" + scores.countries()[static_cast<std::size_t>(i)]);
  names.push_back("year_trend");
  names.push_back("year_trend_x_treat");
  PretrendResult res;
  OlsOptions opts;
  opts.se = SeType::hc1;
  res.fit = ols(y, X, opts, std::move(names));
  const auto row = res.fit.row(k - 1);
  res.beta = row.estimate;
  res.se = row.se;
  res.t = row.t;
  res.p = row.p;
  res.n_obs = n;
  return res;
}

std::vector<std::string> treated_by_rule(const PanelDataset& ds, const std::string& code, int year,
                                         double threshold) {
  const auto k = ds.code_index(code);
  if (!k) throw ConfigError("treatment rule refers to unknown indicator '" + code + "'");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ds.n_countries(); ++i) {
    const auto v = ds.value(i, year, *k);
    if (!v) throw DataError("treatment rule: no value for " + ds.countries()[i].country_id + " in " + std::to_string(year));
    if (*v >= threshold) out.push_back(ds.countries()[i].country_id);
  }
  return out;
}

}  // namespace awpri
