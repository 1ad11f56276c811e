#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace awpri {

enum class Layer { L1 = 0, L2 = 1, L3 = 2 };

std::string to_string(Layer layer);
Layer parse_layer(std::string_view s);

struct IndicatorSpec {
  std::string code;
  Layer layer = Layer::L1;
  /// Apply 1 - x after normalization (raw source coded "higher = better").
  bool invert = false;
  std::string source_label;
};

/// Reads indicator specs from a key-value file, one section per code:
///
///   [rule_of_law_risk]
///   layer = L1
///   invert = false
///   source_label = V-Dem v15
std::vector<IndicatorSpec> read_indicator_specs(std::istream& in);
std::vector<IndicatorSpec> read_indicator_specs(const std::string& path);

/// Unique codes; with `index_design` also exactly five codes per layer.
void validate_specs(std::span<const IndicatorSpec> specs, bool index_design);

enum class IncomeGroup { unknown, high, upper_middle, lower_middle, low };

std::string to_string(IncomeGroup g);
IncomeGroup parse_income_group(std::string_view s);

struct CountryMeta {
  std::string country_id;
  std::string region;
  IncomeGroup income_group = IncomeGroup::unknown;
  std::optional<std::string> treat_flag_source;
};

/// Country x year x indicator cube. Rows of values() are country-major
/// (row = country * n_years + year offset), columns follow codes(); NaN marks
/// a missing cell. Immutable once built.
class PanelDataset {
 public:
  PanelDataset(std::vector<CountryMeta> countries, int first_year, int n_years,
               std::vector<std::string> codes, Eigen::MatrixXd values, bool normalized);

  const std::vector<CountryMeta>& countries() const { return countries_; }
  const std::vector<std::string>& codes() const { return codes_; }
  const Eigen::MatrixXd& values() const { return values_; }

  std::size_t n_countries() const { return countries_.size(); }
  int first_year() const { return first_year_; }
  int last_year() const { return first_year_ + n_years_ - 1; }
  int n_years() const { return n_years_; }
  std::vector<int> years() const;
  bool normalized() const { return normalized_; }

  std::optional<std::size_t> country_index(std::string_view id) const;
  std::optional<std::size_t> code_index(std::string_view code) const;

  Eigen::Index row(std::size_t country, int year) const {
    return static_cast<Eigen::Index>(country) * n_years_ + (year - first_year_);
  }

  std::optional<double> value(std::size_t country, int year, std::size_t code) const;
  std::optional<double> value(std::string_view country, int year, std::string_view code) const;

  /// One country's series for one indicator, ordered by year.
  Eigen::VectorXd series(std::size_t country, std::size_t code) const {
    return values_.block(row(country, first_year_), static_cast<Eigen::Index>(code), n_years_, 1);
  }

  /// n_countries x n_codes slice for one year.
  Eigen::MatrixXd cross_section(int year) const;

  std::size_t missing_count() const;

 private:
  std::vector<CountryMeta> countries_;
  int first_year_;
  int n_years_;
  std::vector<std::string> codes_;
  Eigen::MatrixXd values_;
  bool normalized_;
};

struct LoadOptions {
  char delimiter = ',';
};

struct LoadResult {
  PanelDataset dataset;
  std::vector<std::string> warnings;
};

/// Parses `country,year,<codes...>[,region,income_group]`. Empty fields are
/// missing cells; unknown columns are ignored with a warning.
LoadResult load_panel(std::istream& in, std::span<const IndicatorSpec> specs,
                      const LoadOptions& opts = {});

void write_panel(std::ostream& out, const PanelDataset& ds, char delimiter = ',');

struct ImputeResult {
  PanelDataset dataset;
  std::size_t imputed_cells = 0;
};

/// Fills interior gaps of every (country, code) series by linear interpolation
/// and leading/trailing gaps with the nearest observed value.
ImputeResult impute_linear(const PanelDataset& ds);

struct NormalizeResult {
  PanelDataset dataset;
  std::vector<std::string> warnings;
};

/// Panel-wide min-max scaling per indicator, then 1 - x for inverted codes.
/// Constant indicators map to 0.5.
NormalizeResult normalize_minmax(const PanelDataset& ds, std::span<const IndicatorSpec> specs);

}  // namespace awpri
