#pragma once

namespace awpri::dist {

double normal_cdf(double z);
/// Upper tail, P(Z > z).
double normal_sf(double z);
double normal_quantile(double p);

/// Two-sided p for a t statistic; df = +inf gives the normal case.
double t_two_sided_p(double t, double df);
double t_quantile(double p, double df);

/// Upper tail of chi-square(df).
double chi2_sf(double x, double df);

}  // namespace awpri::dist
