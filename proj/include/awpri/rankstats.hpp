#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace awpri {

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample sd, n - 1 divisor; needs n >= 2
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  std::optional<double> skewness;  // adjusted Fisher-Pearson; needs n >= 3 and sd > 0
};

Descriptives describe(std::span<const double> xs);

/// 1-based ranks with ties sharing the mean of their positions.
Eigen::VectorXd average_ranks(std::span<const double> xs);

double spearman(std::span<const double> x, std::span<const double> y);

struct SpearmanMatrix {
  Eigen::MatrixXd rho;            // NaN on rows/columns of constant inputs
  std::vector<bool> undefined;    // per column
};

SpearmanMatrix spearman_matrix(const Eigen::MatrixXd& data);

enum class TestMethod { exact, normal_approx };

std::string to_string(TestMethod m);

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::exact;
  std::vector<std::size_t> sizes;  // effective n, or one entry per group
  bool tie_corrected = false;
};

struct RankTestOptions {
  bool continuity_correction = true;
  /// Exact enumeration up to this effective n (signed-rank) or n_a + n_b (U).
  std::size_t exact_max_n = 20;
};

/// Paired signed-rank test on x - y. Zero differences are dropped before
/// ranking. W is the rank sum of the positive differences.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                const RankTestOptions& opts = {});

/// Two-sided rank-sum test; statistic is min(U_a, U_b).
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          const RankTestOptions& opts = {});

TestResult kruskal_wallis(std::span<const std::vector<double>> groups);

/// p * m, capped at 1.
std::vector<double> bonferroni(std::span<const double> pvals);

namespace exact {

/// Number of sign assignments per achievable positive-rank sum, indexed by
/// doubled sum (midranks are multiples of 1/2). Size = sum(doubled) + 1.
std::vector<std::uint64_t> signed_rank_counts(std::span<const int> doubled_ranks);

/// Number of size-n_a subsets of {1..n_a+n_b} per value of U_a.
std::vector<std::uint64_t> rank_sum_counts(std::size_t n_a, std::size_t n_b);

}  // namespace exact

}  // namespace awpri
