#include "awpri/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "awpri/errors.hpp"

namespace awpri::dist {

namespace bm = boost::math;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw NumericalError("normal quantile needs p in (0, 1)");
  return bm::quantile(bm::normal_distribution<double>(), p);
}

double t_two_sided_p(double t, double df) {
  if (std::isnan(t)) return std::nan("");
  if (std::isinf(t)) return 0.0;
  if (std::isinf(df)) return 2.0 * normal_sf(std::abs(t));
  if (!(df > 0.0)) throw NumericalError("t distribution needs df > 0");
  return 2.0 * bm::cdf(bm::complement(bm::students_t_distribution<double>(df), std::abs(t)));
}

double t_quantile(double p, double df) {
  if (std::isinf(df)) return normal_quantile(p);
  if (!(df > 0.0)) throw NumericalError("t distribution needs df > 0");
  return bm::quantile(bm::students_t_distribution<double>(df), p);
}

double chi2_sf(double x, double df) {
  if (!(df > 0.0)) throw NumericalError("chi-square needs df > 0");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<double>(df), x));
}

}  // namespace awpri::dist
