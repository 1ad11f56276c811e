#include "awpri/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "awpri/errors.hpp"
#include "awpri/rng.hpp"

namespace awpri {

namespace {

/// Maps arbitrary labels to 0..k-1 in order of first appearance.
std::vector<int> compact_labels(std::span<const int> labels, int& k) {
  std::map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
  k = static_cast<int>(ids.size());
  return out;
}

struct Grouped {
  int k = 0;
  std::vector<int> labels;
  std::vector<int> sizes;
  Eigen::MatrixXd centroids;
};

Grouped group(const Eigen::MatrixXd& points, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw DataError("label count does not match point count");
  }
  Grouped g;
  g.labels = compact_labels(labels, g.k);
  if (g.k < 2) throw DataError("cluster validity indices need at least two clusters");
  g.sizes.assign(static_cast<std::size_t>(g.k), 0);
  g.centroids = Eigen::MatrixXd::Zero(g.k, points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int c = g.labels[static_cast<std::size_t>(i)];
    g.centroids.row(c) += points.row(i);
    ++g.sizes[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < g.k; ++c) g.centroids.row(c) /= g.sizes[static_cast<std::size_t>(c)];
  return g;
}

void check_points(const Eigen::MatrixXd& points, int k) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (k > points.rows()) {
    throw DataError("k = " + std::to_string(k) + " exceeds the number of points (" +
                    std::to_string(points.rows()) + ")");
  }
  if (!points.allFinite()) throw DataError("k-means needs finite coordinates");
}

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

ClusterSolution lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, const KMeansOptions& opts) {
  const Eigen::Index n = points.rows();
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centroids.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    // Empty clusters take the point farthest from its own centroid, drawn
    // from a cluster that can spare one.
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(l)] < 2) continue;
        const double d = (points.row(i) - centroids.row(l)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = c;
      sizes[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) next.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c) next.row(c) /= sizes[static_cast<std::size_t>(c)];
    const double shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(next);
    if (!changed || shift < opts.tol) break;
  }
  ClusterSolution sol;
  sol.k = k;
  sol.labels = std::move(labels);
  sol.centroids = std::move(centroids);
  sol.wss = within_ss(points, sol.labels);
  return sol;
}

void attach_validity(const Eigen::MatrixXd& points, ClusterSolution& sol) {
  if (sol.k >= 2 && sol.k < points.rows()) {
    sol.silhouette = silhouette(points, sol.labels);
    sol.calinski_harabasz = calinski_harabasz(points, sol.labels);
    sol.davies_bouldin = davies_bouldin(points, sol.labels);
  }
}

}  // namespace

double within_ss(const Eigen::MatrixXd& points, std::span<const int> labels) {
  int k = 0;
  const auto compact = compact_labels(labels, k);
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    centroids.row(compact[static_cast<std::size_t>(i)]) += points.row(i);
    ++sizes[static_cast<std::size_t>(compact[static_cast<std::size_t>(i)])];
  }
  for (int c = 0; c < k; ++c) centroids.row(c) /= sizes[static_cast<std::size_t>(c)];
  double wss = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    wss += (points.row(i) - centroids.row(compact[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return wss;
}

ClusterSolution kmeans_from(const Eigen::MatrixXd& points, const Eigen::MatrixXd& init,
                            const KMeansOptions& opts) {
  check_points(points, static_cast<int>(init.rows()));
  if (init.cols() != points.cols()) throw DataError("initial centroids have the wrong dimension");
  auto sol = lloyd(points, init, opts);
  sol.n_init = 1;
  sol.restart_wss = {sol.wss};
  attach_validity(points, sol);
  return sol;
}

ClusterSolution kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                       const KMeansOptions& opts) {
  check_points(points, k);
  if (opts.n_init < 1) throw ConfigError("n_init must be at least 1");
  const Rng root(seed);
  ClusterSolution best;
  std::vector<double> all;
  for (int r = 0; r < opts.n_init; ++r) {
    Rng rng = root.fork(static_cast<std::uint64_t>(r));
    auto sol = lloyd(points, plus_plus_init(points, k, rng), opts);
    all.push_back(sol.wss);
    if (r == 0 || sol.wss < best.wss) {
      best = std::move(sol);
      best.best_restart = r;
    }
  }
  best.seed = seed;
  best.n_init = opts.n_init;
  best.restart_wss = std::move(all);
  attach_validity(points, best);
  return best;
}

std::vector<ElbowPoint> elbow_wss(const Eigen::MatrixXd& points, std::span<const int> ks,
                                  std::uint64_t seed, const KMeansOptions& opts) {
  std::vector<int> sorted(ks.begin(), ks.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<ElbowPoint> out;
  std::optional<ClusterSolution> prev;
  for (int k : sorted) {
    auto sol = kmeans(points, k, seed, opts);
    if (prev && prev->k == k - 1) {
      Eigen::Index far = 0;
      Eigen::VectorXd d(points.rows());
      for (Eigen::Index i = 0; i < points.rows(); ++i) {
        d(i) = (points.row(i) - prev->centroids.row(prev->labels[static_cast<std::size_t>(i)])).squaredNorm();
      }
      d.maxCoeff(&far);
      Eigen::MatrixXd init(k, points.cols());
      init.topRows(k - 1) = prev->centroids;
      init.row(k - 1) = points.row(far);
      auto grown = lloyd(points, init, opts);
      if (grown.wss < sol.wss) {
        grown.seed = seed;
        grown.n_init = sol.n_init;
        grown.restart_wss = sol.restart_wss;
        grown.best_restart = -1;
        attach_validity(points, grown);
        sol = std::move(grown);
      }
    }
    out.push_back({k, sol.wss, sol.silhouette, sol.calinski_harabasz, sol.davies_bouldin});
    prev = std::move(sol);
  }
  return out;
}

double silhouette(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const auto g = group(points, labels);
  const Eigen::Index n = points.rows();
  if (n <= g.k) throw DataError("silhouette needs more points than clusters");
  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(g.k));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = g.labels[static_cast<std::size_t>(i)];
    if (g.sizes[static_cast<std::size_t>(own)] == 1) continue;  // s(i) = 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) sums[static_cast<std::size_t>(g.labels[static_cast<std::size_t>(j)])] += (points.row(i) - points.row(j)).norm();
    }
    const double a = sums[static_cast<std::size_t>(own)] / (g.sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < g.k; ++c) {
      if (c != own) b = std::min(b, sums[static_cast<std::size_t>(c)] / g.sizes[static_cast<std::size_t>(c)]);
    }
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

double calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const auto g = group(points, labels);
  const Eigen::Index n = points.rows();
  if (n <= g.k) throw DataError("Calinski-Harabasz needs more points than clusters");
  const Eigen::RowVectorXd mean = points.colwise().mean();
  double between = 0.0;
  for (int c = 0; c < g.k; ++c) between += g.sizes[static_cast<std::size_t>(c)] * (g.centroids.row(c) - mean).squaredNorm();
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) within += (points.row(i) - g.centroids.row(g.labels[static_cast<std::size_t>(i)])).squaredNorm();
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / (g.k - 1)) / (within / static_cast<double>(n - g.k));
}

double davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const auto g = group(points, labels);
  Eigen::VectorXd scatter = Eigen::VectorXd::Zero(g.k);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int c = g.labels[static_cast<std::size_t>(i)];
    scatter(c) += (points.row(i) - g.centroids.row(c)).norm();
  }
  for (int c = 0; c < g.k; ++c) scatter(c) /= g.sizes[static_cast<std::size_t>(c)];
  double total = 0.0;
  for (int i = 0; i < g.k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < g.k; ++j) {
      if (j == i) continue;
      const double sep = (g.centroids.row(i) - g.centroids.row(j)).norm();
      const double r = sep > 0.0 ? (scatter(i) + scatter(j)) / sep : std::numeric_limits<double>::infinity();
      worst = std::max(worst, r);
    }
    total += worst;
  }
  return total / g.k;
}

AriResult adjusted_rand(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DataError("ARI needs label vectors of equal length");
  if (a.size() < 2) throw DataError("ARI needs at least two items");
  int ka = 0, kb = 0;
  const auto la = compact_labels(a, ka);
  const auto lb = compact_labels(b, kb);
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(ka, kb);
  for (std::size_t i = 0; i < a.size(); ++i) table(la[i], lb[i]) += 1.0;
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  const double index = table.unaryExpr(pairs).sum();
  const double sum_a = table.rowwise().sum().unaryExpr(pairs).sum();
  const double sum_b = table.colwise().sum().unaryExpr(pairs).sum();
  const double expected = sum_a * sum_b / pairs(static_cast<double>(a.size()));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return {1.0, true};
  return {(index - expected) / (max_index - expected), false};
}

}  // namespace awpri
