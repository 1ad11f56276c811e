#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "awpri/arima.hpp"
#include "awpri/index.hpp"
#include "awpri/panel.hpp"

namespace awpri {

/// Draw order (all from one Rng(seed)): country effects for every country,
/// year effects for every year, per-country trends, then the noise term in
/// country-major, year-minor order. A zero sd skips its draws.
struct SynthConfig {
  std::uint64_t seed = 1;
  double base_level = 0.45;
  double country_effect_sd = 0.05;
  double year_effect_sd = 0.01;
  double trend_sd = 0.0;
  double att = 0.0;
  double noise_sd = 0.01;
  /// The first n_treated countries are treated.
  std::size_t n_treated = 0;
  /// Post_t = 1 from this year on.
  int post_first = 2019;
  bool clamp = false;
};

struct SynthTruth {
  std::string version;
  std::uint64_t seed = 0;
  std::vector<std::string> countries;
  int first_year = 0;
  int n_years = 0;
  double base_level = 0.0;
  Eigen::VectorXd country_effects;
  Eigen::VectorXd year_effects;
  Eigen::VectorXd trends;
  std::vector<std::string> treated;
  int post_first = 0;
  double att = 0.0;
  double noise_sd = 0.0;

  /// Outcome without noise (and without clamping), country-major.
  Eigen::VectorXd noise_free() const;
};

struct SynthPanel {
  ScoreTable scores;  // L1 = L2 = L3 = outcome
  SynthTruth truth;
};

/// outcome_it = base + a_i + d_t + trend_i (t - first) + att Post_t Treat_i + e_it
/// Countries are named C01, C02, ...
SynthPanel generate_panel(std::size_t n_countries, int first_year, int last_year, const SynthConfig& cfg);

/// Raw (unnormalized) indicator panel with a per-layer latent level per
/// country; each indicator is an affine image of its layer signal plus
/// noise. A fraction of cells can be blanked to exercise imputation.
PanelDataset generate_indicator_panel(std::size_t n_countries, int first_year, int last_year,
                                      std::span<const IndicatorSpec> specs, std::uint64_t seed,
                                      double missing_rate = 0.0);

struct ArimaParams {
  Eigen::VectorXd ar;
  Eigen::VectorXd ma;
  double constant = 0.0;  // mean of the differenced series
  double sigma = 1.0;
};

/// Simulates ARIMA(order) with 200 discarded burn-in draws.
std::vector<double> generate_arima(ArimaOrder order, const ArimaParams& params, std::size_t n, std::uint64_t seed);

}  // namespace awpri
