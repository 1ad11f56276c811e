#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "awpri/index.hpp"

namespace awpri {

/// Every base + delta with each delta_j a multiple of `step`, |delta_j| <= tol,
/// sum(delta) = 0 and all weights > 0. Sorted lexicographically by (w1, w2, w3).
std::vector<LayerWeights> weight_grid(const LayerWeights& base, double step, double tol);

enum class TierSource { thresholds, kmeans };

struct SensitivityOptions {
  TierSource tiers = TierSource::thresholds;
  // k-means labelling of (awpri, L1, L2, L3) when tiers == kmeans
  int k = 4;
  std::uint64_t seed = 42;
  int n_init = 50;
};

struct SensitivityEntry {
  LayerWeights weights;
  double rho = 1.0;
  double ari = 1.0;
  bool ari_degenerate = false;
};

struct SensitivityReport {
  LayerWeights base = LayerWeights::equal();
  int year = 0;
  TierSource tiers = TierSource::thresholds;
  std::vector<SensitivityEntry> entries;
  double mean_rho = 1.0;
  double min_rho = 1.0;
  double mean_ari = 1.0;
  double min_ari = 1.0;
  double max_ari = 1.0;
};

/// Recomputes the composite for `year` under every grid entry and compares
/// ranking (Spearman) and tier assignment (ARI) with the base weights.
SensitivityReport sensitivity_report(const ScoreTable& scores, int year, std::span<const LayerWeights> grid,
                                     const LayerWeights& base = LayerWeights::equal(),
                                     const SensitivityOptions& opts = {});

}  // namespace awpri
