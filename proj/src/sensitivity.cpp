#include "awpri/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "awpri/cluster.hpp"
#include "awpri/errors.hpp"
#include "awpri/rankstats.hpp"

namespace awpri {

std::vector<LayerWeights> weight_grid(const LayerWeights& base, double step, double tol) {
  if (!(step > 0.0)) throw ConfigError("weight step must be positive");
  if (!(tol >= step)) throw ConfigError("weight tolerance must be at least one step");
  const int reach = static_cast<int>(std::floor(tol / step + 1e-9));
  std::vector<LayerWeights> out;
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      const int k = -(i + j);
      if (std::abs(k) > reach) continue;
      const double w1 = base[0] + i * step;
      const double w2 = base[1] + j * step;
      const double w3 = base[2] + k * step;
      if (w1 <= 0.0 || w2 <= 0.0 || w3 <= 0.0) continue;
      out.emplace_back(w1, w2, w3);
    }
  }
  if (out.empty()) throw ConfigError("weight grid is empty");
  std::sort(out.begin(), out.end(), [](const LayerWeights& a, const LayerWeights& b) { return a.values() < b.values(); });
  return out;
}

namespace {

std::vector<int> labels_for(const Eigen::MatrixX4d& cs, const Eigen::VectorXd& composite,
                            const TierThresholds& th, const SensitivityOptions& opts) {
  std::vector<int> labels;
  if (opts.tiers == TierSource::thresholds) {
    for (Eigen::Index i = 0; i < composite.size(); ++i) labels.push_back(static_cast<int>(assign_tier(composite(i), th)));
    return labels;
  }
  Eigen::MatrixXd features = cs;
  features.col(0) = composite;
  return kmeans(features, opts.k, opts.seed, {.n_init = opts.n_init}).labels;
}

}  // namespace

SensitivityReport sensitivity_report(const ScoreTable& scores, int year, std::span<const LayerWeights> grid,
                                     const LayerWeights& base, const SensitivityOptions& opts) {
  if (grid.empty()) throw ConfigError("sensitivity grid is empty");
  const Eigen::MatrixX4d cs = scores.cross_section(year);
  const Eigen::MatrixXd layers = cs.rightCols(3);
  const Eigen::VectorXd base_scores = composite(layers, base);
  const auto base_labels = labels_for(cs, base_scores, scores.thresholds(), opts);

  SensitivityReport rep;
  rep.base = base;
  rep.year = year;
  rep.tiers = opts.tiers;
  for (const auto& w : grid) {
    const Eigen::VectorXd s = composite(layers, w);
    SensitivityEntry e{w};
    e.rho = spearman({s.data(), static_cast<std::size_t>(s.size())},
                     {base_scores.data(), static_cast<std::size_t>(base_scores.size())});
    const auto labels = labels_for(cs, s, scores.thresholds(), opts);
    const auto ari = adjusted_rand(labels, base_labels);
    e.ari = ari.value;
    e.ari_degenerate = ari.degenerate;
    rep.entries.push_back(e);
  }
  std::sort(rep.entries.begin(), rep.entries.end(),
            [](const SensitivityEntry& a, const SensitivityEntry& b) { return a.weights.values() < b.weights.values(); });
  const double n = static_cast<double>(rep.entries.size());
  double sum_rho = 0.0, sum_ari = 0.0;
  rep.min_rho = rep.min_ari = std::numeric_limits<double>::infinity();
  rep.max_ari = -std::numeric_limits<double>::infinity();
  for (const auto& e : rep.entries) {
    sum_rho += e.rho;
    sum_ari += e.ari;
    rep.min_rho = std::min(rep.min_rho, e.rho);
    rep.min_ari = std::min(rep.min_ari, e.ari);
    rep.max_ari = std::max(rep.max_ari, e.ari);
  }
  rep.mean_rho = sum_rho / n;
  rep.mean_ari = sum_ari / n;
  return rep;
}

}  // namespace awpri
