#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace awpri {

struct ClusterSolution {
  int k = 0;
  std::vector<int> labels;   // in [0, k)
  Eigen::MatrixXd centroids; // k x d
  double wss = 0.0;
  std::uint64_t seed = 0;
  int n_init = 0;
  int best_restart = 0;
  std::vector<double> restart_wss;
  // Present when 2 <= k < n.
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
  std::optional<double> davies_bouldin;
};

struct KMeansOptions {
  int n_init = 50;
  int max_iter = 300;
  double tol = 1e-10;  // max centroid shift
};

/// Best-of-n_init Lloyd runs with k-means++ seeding. Restart r draws from
/// Rng(seed).fork(r); ties on WSS go to the lowest restart index.
ClusterSolution kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                       const KMeansOptions& opts = {});

/// Lloyd iterations from explicit starting centroids.
ClusterSolution kmeans_from(const Eigen::MatrixXd& points, const Eigen::MatrixXd& init,
                            const KMeansOptions& opts = {});

struct ElbowPoint {
  int k;
  double wss;
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
  std::optional<double> davies_bouldin;
};

/// WSS for each k, non-increasing in k. Besides the random restarts, each k
/// also tries the (k-1) solution plus the point farthest from its centroid.
std::vector<ElbowPoint> elbow_wss(const Eigen::MatrixXd& points, std::span<const int> ks,
                                  std::uint64_t seed, const KMeansOptions& opts = {});

double within_ss(const Eigen::MatrixXd& points, std::span<const int> labels);

double silhouette(const Eigen::MatrixXd& points, std::span<const int> labels);
double calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> labels);
double davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels);

struct AriResult {
  double value = 0.0;
  /// Both partitions put every item in one cluster (or both are all
  /// singletons); the index is 0/0 and reported as 1 by convention.
  bool degenerate = false;
};

AriResult adjusted_rand(std::span<const int> a, std::span<const int> b);

}  // namespace awpri
