#include "awpri/serialize.hpp"

#include <cmath>

#include "awpri/text.hpp"

namespace awpri {

namespace {

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json mat(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

template <typename T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string num(double v) { return std::isfinite(v) ? text::format_double(v) : std::string(); }

}  // namespace

Json to_json(const TestResult& r) {
  Json j;
  j["test"] = r.test_name;
  j["statistic"] = r.statistic;
  j["p"] = r.p_value;
  j["method"] = to_string(r.method);
  j["n"] = r.sizes.size() == 1 ? Json(r.sizes.front()) : Json(r.sizes);
  j["ties"] = r.tie_corrected;
  return j;
}

Json to_json(const Descriptives& d) {
  return Json{{"n", d.n},          {"mean", d.mean},     {"sd", opt(d.sd)},
              {"min", d.min},      {"median", d.median}, {"max", d.max},
              {"skewness", opt(d.skewness)}};
}

Json to_json(const CoefficientRow& r) {
  return Json{{"name", r.name}, {"estimate", r.estimate}, {"se", r.se},       {"t", r.t},
              {"p", r.p},       {"ci95_lo", r.ci_lo},     {"ci95_hi", r.ci_hi}};
}

Json to_json(const RegressionFit& fit, bool with_residuals) {
  Json j;
  j["se_type"] = to_string(fit.se_type);
  j["n"] = fit.n;
  j["rank"] = fit.rank;
  j["df_resid"] = fit.df_resid;
  j["inference_df"] = std::isfinite(fit.inference_df) ? Json(fit.inference_df) : Json("normal");
  if (fit.se_type == SeType::cluster) j["clusters"] = fit.n_clusters;
  j["r_squared"] = fit.r_squared;
  j["sigma2"] = fit.sigma2;
  Json rows = Json::array();
  for (Eigen::Index k = 0; k < fit.coefficients.size(); ++k) rows.push_back(to_json(fit.row(k)));
  j["coefficients"] = rows;
  j["covariance"] = mat(fit.covariance);
  if (with_residuals) j["residuals"] = vec(fit.residuals);
  return j;
}

Json to_json(const ReFit& fit) {
  Json j = to_json(fit.fit);
  j["sigma2_e"] = fit.sigma2_e;
  j["sigma2_u"] = fit.sigma2_u;
  j["theta"] = fit.theta;
  j["sigma2_u_floored"] = fit.sigma2_u_floored;
  j["warnings"] = fit.warnings;
  return j;
}

Json to_json(const HausmanResult& h) {
  return Json{{"H", h.statistic}, {"df", h.df}, {"p", h.p_value}, {"pseudo_inverse", h.pseudo_inverse},
              {"regressors", h.names}};
}

Json to_json(const DidResult& r) {
  Json j;
  j["att_beta"] = r.att;
  j["se"] = r.se;
  j["t"] = r.t;
  j["p"] = r.p;
  j["ci95"] = {r.ci_lo, r.ci_hi};
  j["group_means"] = {{"treated_pre", r.treated_pre},
                      {"treated_post", r.treated_post},
                      {"control_pre", r.control_pre},
                      {"control_post", r.control_post}};
  j["raw_did"] = r.raw_did;
  j["design"] = {{"outcome", r.spec.outcome == 0 ? std::string("awpri") : "L" + std::to_string(r.spec.outcome)},
                 {"pre_window", {r.spec.pre_first, r.spec.pre_last}},
                 {"post_window", {r.spec.post_first, r.spec.post_last}},
                 {"excluded_years", r.spec.excluded},
                 {"years_used", r.years_used},
                 {"treated", r.treated},
                 {"control", r.control},
                 {"n_obs", r.n_obs},
                 {"clusters", r.fit.n_clusters},
                 {"se_type", "CR1 clustered by country, t(G-1)"}};
  return j;
}

Json to_json(const PretrendResult& r) {
  return Json{{"beta_interaction", r.beta}, {"se", r.se}, {"t", r.t}, {"p", r.p}, {"n_obs", r.n_obs},
              {"se_type", "hc1"}};
}

Json to_json(const ArimaModel& m) {
  return Json{{"order", {m.order.p, m.order.d, m.order.q}},
              {"ar", vec(m.ar)},
              {"ma", vec(m.ma)},
              {"has_constant", m.has_constant},
              {"constant", m.constant},
              {"sigma2", m.sigma2},
              {"loglik", m.loglik},
              {"aic", m.aic},
              {"n_params", m.n_params},
              {"n_eff", m.n_eff},
              {"converged", m.converged}};
}

Json to_json(const SensitivityReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    entries.push_back({{"weights", e.weights.values()}, {"rho", e.rho}, {"ari", e.ari},
                       {"ari_degenerate", e.ari_degenerate}});
  }
  return Json{{"base_weights", rep.base.values()},
              {"year", rep.year},
              {"tier_source", rep.tiers == TierSource::thresholds ? "thresholds" : "kmeans"},
              {"summary",
               {{"mean_rho", rep.mean_rho},
                {"min_rho", rep.min_rho},
                {"mean_ari", rep.mean_ari},
                {"min_ari", rep.min_ari},
                {"max_ari", rep.max_ari}}},
              {"entries", entries}};
}

Json to_json(const ClusterSolution& sol, const std::vector<std::string>& ids) {
  Json labels = Json::object();
  for (std::size_t i = 0; i < sol.labels.size(); ++i) {
    labels[i < ids.size() ? ids[i] : std::to_string(i)] = sol.labels[i];
  }
  return Json{{"k", sol.k},
              {"seed", sol.seed},
              {"n_init", sol.n_init},
              {"wss", sol.wss},
              {"silhouette", opt(sol.silhouette)},
              {"calinski_harabasz", opt(sol.calinski_harabasz)},
              {"davies_bouldin", opt(sol.davies_bouldin)},
              {"labels", labels},
              {"centroids", mat(sol.centroids)}};
}

Json to_json(const PcaResult& pca, const std::vector<std::string>& variables, const std::vector<std::string>& ids) {
  Json scores = Json::object();
  for (Eigen::Index i = 0; i < pca.scores.rows(); ++i) {
    const auto key = static_cast<std::size_t>(i) < ids.size() ? ids[static_cast<std::size_t>(i)] : std::to_string(i);
    scores[key] = vec(pca.scores.row(i).transpose());
  }
  Json loadings = Json::array();
  for (Eigen::Index c = 0; c < pca.loadings.cols(); ++c) loadings.push_back(vec(pca.loadings.col(c)));
  return Json{{"variables", variables},
              {"eigenvalues", vec(pca.eigenvalues)},
              {"explained_ratios", vec(pca.explained_ratios)},
              {"loadings", loadings},
              {"scores", scores}};
}

Json to_json(const SpearmanMatrix& m, const std::vector<std::string>& variables) {
  Json undefined = Json::array();
  for (std::size_t j = 0; j < m.undefined.size(); ++j) {
    if (m.undefined[j]) undefined.push_back(j < variables.size() ? variables[j] : std::to_string(j));
  }
  return Json{{"variables", variables}, {"rho", mat(m.rho)}, {"undefined", undefined}};
}

void write_forecast_csv(std::ostream& out, const std::vector<ForecastRow>& rows, char d) {
  const double level = rows.empty() ? 0.95 : rows.front().forecast.level;
  const std::string pct = text::format_double(std::round(level * 1e4) / 1e2);
  out << "country" << d << "year" << d << "mean" << d << "lo" << pct << d << "hi" << pct << d << "order_p" << d
      << "order_d" << d << "order_q\n";
  for (const auto& r : rows) {
    for (int h = 0; h < r.forecast.horizon; ++h) {
      out << r.country << d << r.first_year + h << d << num(r.forecast.mean(h)) << d << num(r.forecast.lower(h)) << d
          << num(r.forecast.upper(h)) << d << r.order.p << d << r.order.d << d << r.order.q << '\n';
    }
  }
}

void write_sensitivity_csv(std::ostream& out, const SensitivityReport& rep, char d) {
  out << "w1" << d << "w2" << d << "w3" << d << "rho" << d << "ari\n";
  for (const auto& e : rep.entries) {
    out << num(e.weights[0]) << d << num(e.weights[1]) << d << num(e.weights[2]) << d << num(e.rho) << d
        << num(e.ari) << '\n';
  }
}

void write_trends_csv(std::ostream& out, const std::vector<TrendRow>& rows, char d) {
  out << "country" << d << "n" << d << "beta" << d << "se" << d << "ci_lo" << d << "ci_hi" << d << "p" << d
      << "stars" << d << "note\n";
  for (const auto& r : rows) {
    out << r.country << d << r.n << d;
    if (r.skipped) {
      out << d << d << d << d << d << d << r.note << '\n';
      continue;
    }
    out << num(r.beta) << d << num(r.se) << d << num(r.ci_lo) << d << num(r.ci_hi) << d << num(r.p) << d
        << r.stars << d << r.note << '\n';
  }
}

void write_elbow_csv(std::ostream& out, const std::vector<ElbowPoint>& pts, char d) {
  out << "k" << d << "wss" << d << "silhouette" << d << "calinski_harabasz" << d << "davies_bouldin\n";
  for (const auto& p : pts) {
    out << p.k << d << num(p.wss) << d << (p.silhouette ? num(*p.silhouette) : "") << d
        << (p.calinski_harabasz ? num(*p.calinski_harabasz) : "") << d
        << (p.davies_bouldin ? num(*p.davies_bouldin) : "") << '\n';
  }
}

}  // namespace awpri
