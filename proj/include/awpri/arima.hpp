#pragma once

#include <Eigen/Core>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace awpri {

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;

  friend auto operator<=>(const ArimaOrder&, const ArimaOrder&) = default;
};

std::string to_string(const ArimaOrder& o);

struct ArimaOptions {
  /// Drift term for d = 1. A mean is always fitted for d = 0 and no constant
  /// for d >= 2.
  bool include_drift = true;
  int max_evals = 20000;
};

/// ARMA(p, q) on the d-times differenced series w:
///   (w_t - c) = sum_i ar_i (w_{t-i} - c) + e_t + sum_j ma_j e_{t-j}
/// estimated by conditional sum of squares (e_t = 0 for t < p).
struct ArimaModel {
  ArimaOrder order;
  Eigen::VectorXd ar;
  Eigen::VectorXd ma;
  bool has_constant = false;
  double constant = 0.0;  // mean (d = 0) or drift (d = 1)
  double sigma2 = 0.0;    // CSS / n_eff
  double loglik = 0.0;
  double aic = 0.0;
  int n_params = 0;       // ar + ma + constant + variance
  Eigen::Index n_eff = 0;
  bool converged = false;
};

ArimaModel fit_arima(std::span<const double> series, ArimaOrder order, const ArimaOptions& opts = {});

struct OrderCandidate {
  ArimaOrder order;
  std::optional<ArimaModel> model;
  std::string note;
};

struct OrderSelection {
  ArimaModel best;
  std::vector<OrderCandidate> candidates;
};

/// p, q in {0, 1, 2}, d in {0, 1}.
std::vector<ArimaOrder> default_grid();

/// Minimum-AIC converged fit; ties go to fewer parameters, then lower p.
OrderSelection select_order(std::span<const double> series, std::span<const ArimaOrder> grid,
                            const ArimaOptions& opts = {});

struct Forecast {
  int horizon = 0;
  double level = 0.95;
  Eigen::VectorXd mean;
  Eigen::VectorXd se;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Recursive prediction on the differenced scale, integrated back; variance
/// from psi weights of phi(B)(1 - B)^d. `history` is the series the model
/// was fitted to (or any series of the same kind ending at the origin).
Forecast forecast(const ArimaModel& model, std::span<const double> history, int horizon,
                  double level = 0.95);

Eigen::VectorXd difference(std::span<const double> series, int d);

/// CSS residuals; entries before index p are zero.
Eigen::VectorXd css_residuals(const Eigen::VectorXd& w, double constant, const Eigen::VectorXd& ar,
                              const Eigen::VectorXd& ma);

Eigen::VectorXd psi_weights(const Eigen::VectorXd& ar, const Eigen::VectorXd& ma, int d, int count);

/// Maps partial autocorrelations in (-1, 1) to the coefficients of a
/// stationary AR polynomial 1 - sum a_j z^j.
Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& pacf);
/// Inverse of pacf_to_ar; nullopt when the polynomial is not stationary.
std::optional<Eigen::VectorXd> ar_to_pacf(const Eigen::VectorXd& ar);

bool is_stationary(const Eigen::VectorXd& ar);
/// MA polynomial 1 + sum ma_j z^j has all roots outside the unit circle.
bool is_invertible(const Eigen::VectorXd& ma);

}  // namespace awpri
