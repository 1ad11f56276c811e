#include "awpri/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "awpri/errors.hpp"
#include "awpri/rng.hpp"

namespace awpri {

namespace {

std::string country_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "C%02zu", i + 1);
  return buf;
}

Eigen::VectorXd draw(Rng& rng, Eigen::Index n, double sd) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  if (sd > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal(0.0, sd);
  }
  return v;
}

}  // namespace

Eigen::VectorXd SynthTruth::noise_free() const {
  const auto n_c = static_cast<Eigen::Index>(countries.size());
  Eigen::VectorXd out(n_c * n_years);
  for (Eigen::Index i = 0; i < n_c; ++i) {
    const bool treat = std::find(treated.begin(), treated.end(), countries[static_cast<std::size_t>(i)]) != treated.end();
    for (int t = 0; t < n_years; ++t) {
      const bool post = first_year + t >= post_first;
      out(i * n_years + t) = base_level + country_effects(i) + year_effects(t) + trends(i) * t +
                             (post && treat ? att : 0.0);
    }
  }
  return out;
}

SynthPanel generate_panel(std::size_t n_countries, int first_year, int last_year, const SynthConfig& cfg) {
  if (n_countries < 2) throw ConfigError("synthetic panel needs at least two countries");
  if (last_year - first_year + 1 < 3) throw ConfigError("synthetic panel needs at least three years");
  if (cfg.n_treated > n_countries) throw ConfigError("more treated countries than countries");
  SynthTruth truth;
  truth.version = std::string("synth-panel-v1/") + Rng::kVersion;
  truth.seed = cfg.seed;
  truth.first_year = first_year;
  truth.n_years = last_year - first_year + 1;
  truth.base_level = cfg.base_level;
  truth.post_first = cfg.post_first;
  truth.att = cfg.att;
  truth.noise_sd = cfg.noise_sd;
  for (std::size_t i = 0; i < n_countries; ++i) truth.countries.push_back(country_name(i));
  truth.treated.assign(truth.countries.begin(), truth.countries.begin() + static_cast<std::ptrdiff_t>(cfg.n_treated));

  Rng rng(cfg.seed);
  const auto n_c = static_cast<Eigen::Index>(n_countries);
  truth.country_effects = draw(rng, n_c, cfg.country_effect_sd);
  truth.year_effects = draw(rng, truth.n_years, cfg.year_effect_sd);
  truth.trends = draw(rng, n_c, cfg.trend_sd);
  Eigen::VectorXd y = truth.noise_free() + draw(rng, n_c * truth.n_years, cfg.noise_sd);
  if (cfg.clamp) y = y.cwiseMax(0.0).cwiseMin(1.0);

  Eigen::MatrixX3d layers(y.size(), 3);
  layers << y, y, y;
  return {ScoreTable(truth.countries, first_year, truth.n_years, std::move(layers)), std::move(truth)};
}

PanelDataset generate_indicator_panel(std::size_t n_countries, int first_year, int last_year,
                                      std::span<const IndicatorSpec> specs, std::uint64_t seed,
                                      double missing_rate) {
  if (n_countries < 1 || last_year < first_year) throw ConfigError("degenerate synthetic panel dimensions");
  validate_specs(specs, false);
  Rng rng(seed);
  const int T = last_year - first_year + 1;
  const auto n_c = static_cast<Eigen::Index>(n_countries);
  Eigen::MatrixXd level(n_c, 3), slope(n_c, 3);
  for (Eigen::Index i = 0; i < n_c; ++i) {
    for (int j = 0; j < 3; ++j) {
      level(i, j) = 0.2 + 0.6 * rng.uniform();
      slope(i, j) = rng.normal(0.0, 0.004);
    }
  }
  const auto K = static_cast<Eigen::Index>(specs.size());
  Eigen::VectorXd offset(K), scale(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    offset(k) = 100.0 * rng.uniform();
    scale(k) = 1.0 + 49.0 * rng.uniform();
  }
  Eigen::MatrixXd values(n_c * T, K);
  for (Eigen::Index i = 0; i < n_c; ++i) {
    for (int t = 0; t < T; ++t) {
      for (Eigen::Index k = 0; k < K; ++k) {
        const int j = static_cast<int>(specs[static_cast<std::size_t>(k)].layer);
        double signal = level(i, j) + slope(i, j) * t + rng.normal(0.0, 0.03);
        if (specs[static_cast<std::size_t>(k)].invert) signal = 1.0 - signal;
        values(i * T + t, k) = offset(k) + scale(k) * signal;
      }
    }
  }
  if (missing_rate > 0.0) {
    for (Eigen::Index i = 0; i < n_c; ++i) {
      for (Eigen::Index k = 0; k < K; ++k) {
        // keep at least the middle observation of every series
        for (int t = 0; t < T; ++t) {
          if (t != T / 2 && rng.uniform() < missing_rate) values(i * T + t, k) = std::nan("");
        }
      }
    }
  }
  std::vector<CountryMeta> countries;
  for (std::size_t i = 0; i < n_countries; ++i) countries.push_back({country_name(i), "", IncomeGroup::unknown, {}});
  std::vector<std::string> codes;
  for (const auto& s : specs) codes.push_back(s.code);
  return PanelDataset(std::move(countries), first_year, T, std::move(codes), std::move(values), false);
}

std::vector<double> generate_arima(ArimaOrder order, const ArimaParams& params, std::size_t n, std::uint64_t seed) {
  if (params.ar.size() != order.p || params.ma.size() != order.q) {
    throw ConfigError("ARIMA parameters do not match the order");
  }
  if (!is_stationary(params.ar)) throw ConfigError("AR parameters are not stationary");
  if (!is_invertible(params.ma)) throw ConfigError("MA parameters are not invertible");
  if (!(params.sigma >= 0.0)) throw ConfigError("innovation sd must be non-negative");
  constexpr std::size_t burn = 200;
  Rng rng(seed);
  const std::size_t total = burn + n;
  std::vector<double> w(total, params.constant), e(total, 0.0);
  for (std::size_t t = 0; t < total; ++t) {
    e[t] = rng.normal(0.0, params.sigma);
    double v = params.constant + e[t];
    for (Eigen::Index i = 1; i <= order.p; ++i) {
      if (t >= static_cast<std::size_t>(i)) v += params.ar(i - 1) * (w[t - static_cast<std::size_t>(i)] - params.constant);
    }
    for (Eigen::Index j = 1; j <= order.q; ++j) {
      if (t >= static_cast<std::size_t>(j)) v += params.ma(j - 1) * e[t - static_cast<std::size_t>(j)];
    }
    w[t] = v;
  }
  std::vector<double> out(w.begin() + static_cast<std::ptrdiff_t>(burn), w.end());
  for (int k = 0; k < order.d; ++k) {
    double acc = 0.0;
    for (double& v : out) {
      acc += v;
      v = acc;
    }
  }
  return out;
}

}  // namespace awpri
