#pragma once

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "awpri/panel.hpp"

namespace awpri {

/// Layer weights: strictly positive, summing to one within 1e-12.
class LayerWeights {
 public:
  LayerWeights(double w1, double w2, double w3);
  static LayerWeights equal() { return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}; }

  double operator[](std::size_t j) const { return w_[j]; }
  const std::array<double, 3>& values() const { return w_; }
  Eigen::Vector3d vector() const { return {w_[0], w_[1], w_[2]}; }

  friend bool operator==(const LayerWeights&, const LayerWeights&) = default;

 private:
  std::array<double, 3> w_;
};

enum class Tier { Critical, High, Moderate, Low };

std::string to_string(Tier t);

/// Lower bounds of the three upper tiers. A score equal to a bound goes to
/// the riskier tier.
struct TierThresholds {
  double critical = 0.55;
  double high = 0.45;
  double moderate = 0.35;

  void validate() const;
};

Tier assign_tier(double score, const TierThresholds& th = {});

template <typename Scalar>
Scalar composite(Scalar l1, Scalar l2, Scalar l3, const LayerWeights& w = LayerWeights::equal()) {
  return static_cast<Scalar>(w[0]) * l1 + static_cast<Scalar>(w[1]) * l2 + static_cast<Scalar>(w[2]) * l3;
}

/// Row-wise composite of an n x 3 layer matrix.
template <typename Derived>
Eigen::VectorXd composite(const Eigen::MatrixBase<Derived>& layers,
                          const LayerWeights& w = LayerWeights::equal()) {
  return layers * w.vector();
}

/// n_rows x 3 matrix of layer means, rows aligned with ds.values().
Eigen::MatrixX3d layer_scores(const PanelDataset& ds, std::span<const IndicatorSpec> specs);

/// Layer, composite and tier per country-year. Rows are country-major like
/// PanelDataset.
class ScoreTable {
 public:
  ScoreTable(std::vector<std::string> countries, int first_year, int n_years,
             Eigen::MatrixX3d layers, const LayerWeights& weights = LayerWeights::equal(),
             const TierThresholds& thresholds = {});

  const std::vector<std::string>& countries() const { return countries_; }
  std::size_t n_countries() const { return countries_.size(); }
  int first_year() const { return first_year_; }
  int last_year() const { return first_year_ + n_years_ - 1; }
  int n_years() const { return n_years_; }
  const Eigen::MatrixX3d& layers() const { return layers_; }
  const Eigen::VectorXd& awpri() const { return awpri_; }
  const std::vector<Tier>& tiers() const { return tiers_; }
  const LayerWeights& weights() const { return weights_; }
  const TierThresholds& thresholds() const { return thresholds_; }

  std::optional<std::size_t> country_index(std::string_view id) const;
  Eigen::Index row(std::size_t country, int year) const {
    return static_cast<Eigen::Index>(country) * n_years_ + (year - first_year_);
  }

  /// Per-country rows of (awpri, L1, L2, L3) for one year.
  Eigen::MatrixX4d cross_section(int year) const;
  /// Outcome column: 0 = awpri, 1..3 = L1..L3.
  Eigen::VectorXd outcome(int column) const;

  ScoreTable reweighted(const LayerWeights& w) const;

 private:
  std::vector<std::string> countries_;
  int first_year_;
  int n_years_;
  Eigen::MatrixX3d layers_;
  Eigen::VectorXd awpri_;
  std::vector<Tier> tiers_;
  LayerWeights weights_;
  TierThresholds thresholds_;
};

ScoreTable score_panel(const PanelDataset& ds, std::span<const IndicatorSpec> specs,
                       const LayerWeights& w = LayerWeights::equal(), const TierThresholds& th = {});

/// Columns: country, year, L1, L2, L3, awpri, tier.
void write_scores(std::ostream& out, const ScoreTable& st, char delimiter = ',');

/// Reads `country,year,L1,L2,L3[,...]`; extra columns are ignored and the
/// composite is recomputed under `w`.
ScoreTable read_layer_table(std::istream& in, const LayerWeights& w = LayerWeights::equal(),
                            const TierThresholds& th = {}, char delimiter = ',');

}  // namespace awpri
