#include "awpri/arima.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "awpri/distributions.hpp"
#include "awpri/errors.hpp"

namespace awpri {

namespace {

struct Minimum {
  Eigen::VectorXd x;
  double f = 0.0;
  bool converged = false;
  int evals = 0;
};

/// Nelder-Mead with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2).
Minimum nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
                    const Eigen::VectorXd& step, int max_evals) {
  const Eigen::Index n = start.size();
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> vals;
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  pts.push_back(start);
  vals.push_back(eval(start));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x = start;
    x(i) += step(i);
    pts.push_back(x);
    vals.push_back(eval(x));
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));
  bool converged = false;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    double spread_x = 0.0;
    for (const auto& p : pts) spread_x = std::max(spread_x, (p - pts[best]).cwiseAbs().maxCoeff());
    const double spread_f = vals[worst] - vals[best];
    if (spread_f <= 1e-13 * std::abs(vals[best]) + 1e-300 && spread_x <= 1e-9) {
      converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(it - vals.begin());
  return {pts[idx], vals[idx], converged, evals};
}

// Keeps boundary solutions far enough inside (-1, 1) for the step-down
// recursion in ar_to_pacf to confirm them.
constexpr double kPacfBound = 1.0 - 1e-6;

Eigen::VectorXd bounded_pacf(const Eigen::VectorXd& u) {
  return u.unaryExpr([](double v) { return std::clamp(std::tanh(v), -kPacfBound, kPacfBound); });
}

double gaussian_loglik(double css, Eigen::Index n_eff) {
  const double nn = static_cast<double>(n_eff);
  const double s2 = std::max(css / nn, std::numeric_limits<double>::min());
  return -0.5 * nn * (std::log(2.0 * std::numbers::pi * s2) + 1.0);
}

}  // namespace

std::string to_string(const ArimaOrder& o) {
  return "(" + std::to_string(o.p) + "," + std::to_string(o.d) + "," + std::to_string(o.q) + ")";
}

Eigen::VectorXd difference(std::span<const double> series, int d) {
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(series.data(), static_cast<Eigen::Index>(series.size()));
  for (int i = 0; i < d; ++i) {
    if (w.size() < 2) return Eigen::VectorXd();
    w = (w.tail(w.size() - 1) - w.head(w.size() - 1)).eval();
  }
  return w;
}

Eigen::VectorXd css_residuals(const Eigen::VectorXd& w, double constant, const Eigen::VectorXd& ar,
                              const Eigen::VectorXd& ma) {
  const Eigen::Index m = w.size();
  const Eigen::Index p = ar.size();
  const Eigen::Index q = ma.size();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  for (Eigen::Index t = p; t < m; ++t) {
    double v = w(t) - constant;
    for (Eigen::Index i = 1; i <= p; ++i) v -= ar(i - 1) * (w(t - i) - constant);
    for (Eigen::Index j = 1; j <= q && j <= t; ++j) v -= ma(j - 1) * e(t - j);
    e(t) = v;
  }
  return e;
}

Eigen::VectorXd pacf_to_ar(const Eigen::VectorXd& pacf) {
  const Eigen::Index p = pacf.size();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double r = pacf(k);
    const Eigen::VectorXd prev = a.head(k);
    for (Eigen::Index j = 0; j < k; ++j) a(j) = prev(j) - r * prev(k - 1 - j);
    a(k) = r;
  }
  return a;
}

std::optional<Eigen::VectorXd> ar_to_pacf(const Eigen::VectorXd& ar) {
  Eigen::VectorXd a = ar;
  Eigen::VectorXd pacf(ar.size());
  for (Eigen::Index k = ar.size() - 1; k >= 0; --k) {
    const double r = a(k);
    if (!(std::abs(r) < 1.0)) return std::nullopt;
    pacf(k) = r;
    const Eigen::VectorXd cur = a.head(k);
    for (Eigen::Index j = 0; j < k; ++j) a(j) = (cur(j) + r * cur(k - 1 - j)) / (1.0 - r * r);
  }
  return pacf;
}

bool is_stationary(const Eigen::VectorXd& ar) { return ar_to_pacf(ar).has_value(); }

bool is_invertible(const Eigen::VectorXd& ma) { return ar_to_pacf(-ma).has_value(); }

Eigen::VectorXd psi_weights(const Eigen::VectorXd& ar, const Eigen::VectorXd& ma, int d, int count) {
  // phi*(B) = phi(B) (1 - B)^d, written as 1 - sum phi*_i B^i.
  Eigen::VectorXd poly = Eigen::VectorXd::Zero(ar.size() + 1);
  poly(0) = 1.0;
  poly.tail(ar.size()) = -ar;
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(poly.size() + 1);
    next.head(poly.size()) += poly;
    next.tail(poly.size()) -= poly;
    poly = next;
  }
  const Eigen::VectorXd phi = -poly.tail(poly.size() - 1);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(std::max(count, 0));
  for (int j = 0; j < count; ++j) {
    double v = j == 0 ? 1.0 : (j <= ma.size() ? ma(j - 1) : 0.0);
    for (int i = 1; i <= std::min<Eigen::Index>(j, phi.size()); ++i) v += phi(i - 1) * psi(j - i);
    psi(j) = v;
  }
  return psi;
}

ArimaModel fit_arima(std::span<const double> series, ArimaOrder order, const ArimaOptions& opts) {
  if (order.p < 0 || order.d < 0 || order.q < 0) throw ConfigError("ARIMA orders must be non-negative");
  for (double v : series) {
    if (!std::isfinite(v)) throw DataError("ARIMA series must be finite");
  }
  const Eigen::VectorXd w = difference(series, order.d);
  if (w.size() < order.p + order.q + order.d + 3) {
    throw DataError("series too short for ARIMA" + to_string(order) + ": " + std::to_string(series.size()) +
                    " observations");
  }
  ArimaModel model;
  model.order = order;
  model.has_constant = order.d == 0 || (order.d == 1 && opts.include_drift);
  model.n_eff = w.size() - order.p;
  model.n_params = order.p + order.q + (model.has_constant ? 1 : 0) + 1;

  const double mean = w.mean();
  double css = 0.0;
  if (order.p == 0 && order.q == 0) {
    model.constant = model.has_constant ? mean : 0.0;
    model.ar = Eigen::VectorXd();
    model.ma = Eigen::VectorXd();
    css = (w.array() - model.constant).matrix().squaredNorm();
    model.converged = true;
  } else {
    const int nc = model.has_constant ? 1 : 0;
    auto unpack = [&](const Eigen::VectorXd& x, double& c, Eigen::VectorXd& ar, Eigen::VectorXd& ma) {
      c = nc ? x(0) : 0.0;
      ar = pacf_to_ar(bounded_pacf(x.segment(nc, order.p)));
      ma = -pacf_to_ar(bounded_pacf(x.segment(nc + order.p, order.q)));
    };
    auto objective = [&](const Eigen::VectorXd& x) {
      double c = 0.0;
      Eigen::VectorXd ar, ma;
      unpack(x, c, ar, ma);
      return css_residuals(w, c, ar, ma).squaredNorm();
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nc + order.p + order.q);
    Eigen::VectorXd step = Eigen::VectorXd::Constant(x0.size(), 0.3);
    if (nc) {
      const double sd = std::sqrt((w.array() - mean).square().sum() / static_cast<double>(w.size()));
      x0(0) = mean;
      step(0) = 0.1 * sd + 1e-6 * (1.0 + std::abs(mean));
    }
    Minimum best = nelder_mead(objective, x0, step, opts.max_evals);
    int used = best.evals;
    // Restart from the optimum until it stops moving.
    for (int r = 0; r < 3 && used < opts.max_evals; ++r) {
      Minimum again = nelder_mead(objective, best.x, 0.1 * step, opts.max_evals - used);
      used += again.evals;
      const bool settled = again.f >= best.f - 1e-13 * std::abs(best.f);
      if (again.f <= best.f) best = again;
      if (settled && best.converged) break;
    }
    unpack(best.x, model.constant, model.ar, model.ma);
    css = best.f;
    model.converged = best.converged && std::isfinite(css);
  }
  model.sigma2 = css / static_cast<double>(model.n_eff);
  model.loglik = gaussian_loglik(css, model.n_eff);
  model.aic = 2.0 * model.n_params - 2.0 * model.loglik;
  return model;
}

std::vector<ArimaOrder> default_grid() {
  std::vector<ArimaOrder> grid;
  for (int d = 0; d <= 1; ++d) {
    for (int p = 0; p <= 2; ++p) {
      for (int q = 0; q <= 2; ++q) grid.push_back({p, d, q});
    }
  }
  return grid;
}

OrderSelection select_order(std::span<const double> series, std::span<const ArimaOrder> grid,
                            const ArimaOptions& opts) {
  if (grid.empty()) throw ConfigError("ARIMA order grid is empty");
  OrderSelection sel;
  const ArimaModel* best = nullptr;
  for (const auto& order : grid) {
    OrderCandidate cand{order, std::nullopt, ""};
    try {
      cand.model = fit_arima(series, order, opts);
      if (!cand.model->converged) cand.note = "did not converge";
    } catch (const DataError& e) {
      cand.note = e.what();
    }
    sel.candidates.push_back(std::move(cand));
  }
  for (const auto& cand : sel.candidates) {
    if (!cand.model || !cand.model->converged) continue;
    const auto& m = *cand.model;
    if (!best || m.aic < best->aic ||
        (m.aic == best->aic && (m.n_params < best->n_params ||
                                (m.n_params == best->n_params && m.order.p < best->order.p)))) {
      best = &m;
    }
  }
  if (!best) throw NumericalError("no ARIMA order in the grid produced a converged fit");
  sel.best = *best;
  return sel;
}

Forecast forecast(const ArimaModel& model, std::span<const double> history, int horizon, double level) {
  if (horizon < 1) throw ConfigError("forecast horizon must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0, 1)");
  const int d = model.order.d;
  const auto p = model.ar.size();
  if (static_cast<Eigen::Index>(history.size()) < d + p + 1) throw DataError("history too short to forecast");

  std::vector<Eigen::VectorXd> levels;
  for (int i = 0; i <= d; ++i) levels.push_back(difference(history, i));
  const Eigen::VectorXd& w = levels.back();
  const Eigen::VectorXd e = css_residuals(w, model.constant, model.ar, model.ma);

  const Eigen::Index m = w.size();
  Eigen::VectorXd ext(m + horizon);
  ext.head(m) = w;
  Eigen::VectorXd eext = Eigen::VectorXd::Zero(m + horizon);
  eext.head(m) = e;
  for (Eigen::Index t = m; t < m + horizon; ++t) {
    double v = model.constant;
    for (Eigen::Index i = 1; i <= p; ++i) v += model.ar(i - 1) * (ext(t - i) - model.constant);
    for (Eigen::Index j = 1; j <= model.ma.size(); ++j) {
      if (t - j >= 0) v += model.ma(j - 1) * eext(t - j);
    }
    ext(t) = v;
  }
  Eigen::VectorXd path = ext.tail(horizon);
  for (int lvl = d - 1; lvl >= 0; --lvl) {
    double prev = levels[static_cast<std::size_t>(lvl)](levels[static_cast<std::size_t>(lvl)].size() - 1);
    for (int h = 0; h < horizon; ++h) {
      prev += path(h);
      path(h) = prev;
    }
  }

  Forecast fc;
  fc.horizon = horizon;
  fc.level = level;
  fc.mean = path;
  const Eigen::VectorXd psi = psi_weights(model.ar, model.ma, d, horizon);
  fc.se.resize(horizon);
  double acc = 0.0;
  for (int h = 0; h < horizon; ++h) {
    acc += psi(h) * psi(h);
    fc.se(h) = std::sqrt(model.sigma2 * acc);
  }
  const double z = dist::normal_quantile(0.5 + level / 2.0);
  fc.lower = fc.mean - z * fc.se;
  fc.upper = fc.mean + z * fc.se;
  return fc;
}

}  // namespace awpri
