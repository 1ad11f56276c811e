#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "awpri/arima.hpp"
#include "awpri/cluster.hpp"
#include "awpri/econ.hpp"
#include "awpri/pca.hpp"
#include "awpri/rankstats.hpp"
#include "awpri/sensitivity.hpp"
#include "json.hpp"

namespace awpri {

using Json = nlohmann::ordered_json;

/// {test, statistic, p, method, n, ties}
Json to_json(const TestResult& r);
Json to_json(const Descriptives& d);
Json to_json(const CoefficientRow& r);
Json to_json(const RegressionFit& fit, bool with_residuals = false);
Json to_json(const ReFit& fit);
Json to_json(const HausmanResult& h);
Json to_json(const DidResult& r);
Json to_json(const PretrendResult& r);
Json to_json(const ArimaModel& m);
Json to_json(const SensitivityReport& rep);

/// Labels keyed by item id.
Json to_json(const ClusterSolution& sol, const std::vector<std::string>& ids);
Json to_json(const PcaResult& pca, const std::vector<std::string>& variables, const std::vector<std::string>& ids);
Json to_json(const SpearmanMatrix& m, const std::vector<std::string>& variables);

struct ForecastRow {
  std::string country;
  ArimaOrder order;
  int first_year = 0;  // year of the first forecast step
  Forecast forecast;
};

/// Columns: country, year, mean, lo<L>, hi<L>, order_p, order_d, order_q, where
/// <L> is the interval level in percent (lo95/hi95 at 0.95).
void write_forecast_csv(std::ostream& out, const std::vector<ForecastRow>& rows, char delimiter = ',');

/// Columns: w1, w2, w3, rho, ari.
void write_sensitivity_csv(std::ostream& out, const SensitivityReport& rep, char delimiter = ',');

/// Columns: country, n, beta, se, ci_lo, ci_hi, p, stars, note.
void write_trends_csv(std::ostream& out, const std::vector<TrendRow>& rows, char delimiter = ',');

/// Columns: k, wss, silhouette, calinski_harabasz, davies_bouldin.
void write_elbow_csv(std::ostream& out, const std::vector<ElbowPoint>& pts, char delimiter = ',');

}  // namespace awpri
