#include "awpri/rankstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "awpri/distributions.hpp"
#include "awpri/errors.hpp"

namespace awpri {

namespace {

/// Sum over tie groups of t^3 - t.
double tie_term(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double t = static_cast<double>(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

double normal_two_sided(double deviation, double sd, bool continuity) {
  if (sd <= 0.0) return 1.0;
  double dev = std::abs(deviation);
  if (continuity) dev = std::max(0.0, dev - 0.5);
  return std::min(1.0, 2.0 * dist::normal_sf(dev / sd));
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const bool constant = (a.array() == a(0)).all() || (b.array() == b(0)).all();
  if (constant) throw NumericalError("correlation undefined for a constant vector");
  if (a == b) return 1.0;
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  if (denom == 0.0) throw NumericalError("correlation undefined for a constant vector");
  return std::clamp(ca.dot(cb) / denom, -1.0, 1.0);
}

}  // namespace

std::string to_string(TestMethod m) { return m == TestMethod::exact ? "exact" : "normal_approx"; }

Descriptives describe(std::span<const double> xs) {
  if (xs.empty()) throw DataError("describe needs at least one value");
  Descriptives d;
  d.n = xs.size();
  const double n = static_cast<double>(d.n);
  d.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  d.min = sorted.front();
  d.max = sorted.back();
  const std::size_t mid = d.n / 2;
  d.median = d.n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    const double e = x - d.mean;
    m2 += e * e;
    m3 += e * e * e;
  }
  if (d.n >= 2) d.sd = std::sqrt(m2 / (n - 1.0));
  m2 /= n;
  m3 /= n;
  if (d.n >= 3 && m2 > 0.0) {
    const double g1 = m3 / std::pow(m2, 1.5);
    d.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  }
  return d;
}

Eigen::VectorXd average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  Eigen::VectorXd ranks(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xs[order[j]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);  // mean of positions i+1..j
    for (std::size_t m = i; m < j; ++m) ranks(static_cast<Eigen::Index>(order[m])) = r;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("spearman needs equal-length inputs");
  if (x.size() < 2) throw DataError("spearman needs at least two pairs");
  return pearson(average_ranks(x), average_ranks(y));
}

SpearmanMatrix spearman_matrix(const Eigen::MatrixXd& data) {
  if (data.rows() < 2) throw DataError("spearman matrix needs at least two rows");
  const Eigen::Index p = data.cols();
  std::vector<Eigen::VectorXd> ranks;
  SpearmanMatrix out{Eigen::MatrixXd::Constant(p, p, std::nan("")),
                     std::vector<bool>(static_cast<std::size_t>(p), false)};
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd col = data.col(j);
    ranks.push_back(average_ranks({col.data(), static_cast<std::size_t>(col.size())}));
    out.undefined[static_cast<std::size_t>(j)] = (col.array() == col(0)).all();
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (out.undefined[static_cast<std::size_t>(i)]) continue;
    out.rho(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if (out.undefined[static_cast<std::size_t>(j)]) continue;
      out.rho(i, j) = out.rho(j, i) = pearson(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

namespace exact {

std::vector<std::uint64_t> signed_rank_counts(std::span<const int> doubled_ranks) {
  const int total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
  counts[0] = 1;
  int reach = 0;
  for (int r : doubled_ranks) {
    for (int s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    reach += r;
  }
  return counts;
}

std::vector<std::uint64_t> rank_sum_counts(std::size_t n_a, std::size_t n_b) {
  // ways[k][u]: subsets of size k of the ranks seen so far with
  // (rank sum - k(k+1)/2) = u; adding rank i as the k-th pick shifts u by i - k.
  const std::size_t n = n_a + n_b;
  const std::size_t max_u = n_a * n_b;
  std::vector<std::vector<std::uint64_t>> ways(n_a + 1, std::vector<std::uint64_t>(max_u + 1, 0));
  ways[0][0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = std::min(i, n_a); k >= 1; --k) {
      const std::size_t shift = i - k;
      if (shift > n_b) continue;
      for (std::size_t u = max_u; u + 1 > shift; --u) ways[k][u] += ways[k - 1][u - shift];
    }
  }
  return ways[n_a];
}

}  // namespace exact

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                const RankTestOptions& opts) {
  if (x.size() != y.size()) throw DataError("signed-rank test needs paired inputs of equal length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) throw NumericalError("degenerate pairing: every difference is zero");
  std::vector<double> mags(diffs.size());
  std::transform(diffs.begin(), diffs.end(), mags.begin(), [](double d) { return std::abs(d); });
  const Eigen::VectorXd ranks = average_ranks(mags);

  TestResult res;
  res.test_name = "wilcoxon_signed_rank";
  const std::size_t n = diffs.size();
  res.sizes = {n};
  const double ties = tie_term(mags);
  res.tie_corrected = ties > 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (diffs[i] > 0.0) w += ranks(static_cast<Eigen::Index>(i));
  }
  res.statistic = w;

  if (n <= opts.exact_max_n) {
    std::vector<int> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = static_cast<int>(std::lround(2.0 * ranks(static_cast<Eigen::Index>(i))));
    const auto counts = exact::signed_rank_counts(doubled);
    const auto w2 = static_cast<std::size_t>(std::lround(2.0 * w));
    std::uint64_t le = 0, ge = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (s <= w2) le += counts[s];
      if (s >= w2) ge += counts[s];
    }
    res.method = TestMethod::exact;
    res.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / std::ldexp(1.0, static_cast<int>(n)));
    return res;
  }
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - ties / 48.0;
  res.method = TestMethod::normal_approx;
  res.p_value = normal_two_sided(w - mean, std::sqrt(std::max(var, 0.0)), opts.continuity_correction);
  return res;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          const RankTestOptions& opts) {
  if (a.empty() || b.empty()) throw DataError("Mann-Whitney U needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const Eigen::VectorXd ranks = average_ranks(pooled);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ra = ranks.head(static_cast<Eigen::Index>(a.size())).sum();
  const double ua = ra - na * (na + 1.0) / 2.0;
  const double ub = na * nb - ua;
  const double ties = tie_term(pooled);

  TestResult res;
  res.test_name = "mann_whitney_u";
  res.statistic = std::min(ua, ub);
  res.sizes = {a.size(), b.size()};
  res.tie_corrected = ties > 0.0;

  if (ties == 0.0 && pooled.size() <= opts.exact_max_n) {
    const auto counts = exact::rank_sum_counts(a.size(), b.size());
    const auto u_min = static_cast<std::size_t>(std::lround(res.statistic));
    std::uint64_t le = 0, total = 0;
    for (std::size_t u = 0; u < counts.size(); ++u) {
      total += counts[u];
      if (u <= u_min) le += counts[u];
    }
    res.method = TestMethod::exact;
    res.p_value = std::min(1.0, 2.0 * static_cast<double>(le) / static_cast<double>(total));
    return res;
  }
  const double n = na + nb;
  const double var = na * nb / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
  res.method = TestMethod::normal_approx;
  res.p_value = normal_two_sided(ua - na * nb / 2.0, std::sqrt(std::max(var, 0.0)), opts.continuity_correction);
  return res;
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw DataError("Kruskal-Wallis needs at least two groups");
  std::vector<double> pooled;
  TestResult res;
  res.test_name = "kruskal_wallis";
  res.method = TestMethod::normal_approx;
  for (const auto& g : groups) {
    if (g.empty()) throw DataError("Kruskal-Wallis groups must be non-empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
    res.sizes.push_back(g.size());
  }
  if (pooled.size() < 3) throw DataError("Kruskal-Wallis needs at least three observations");
  const Eigen::VectorXd ranks = average_ranks(pooled);
  const double n = static_cast<double>(pooled.size());
  double acc = 0.0;
  Eigen::Index offset = 0;
  for (const auto& g : groups) {
    const auto m = static_cast<Eigen::Index>(g.size());
    const double r = ranks.segment(offset, m).sum();
    acc += r * r / static_cast<double>(m);
    offset += m;
  }
  const double ties = tie_term(pooled);
  res.tie_corrected = ties > 0.0;
  const double correction = 1.0 - ties / (n * n * n - n);
  if (correction <= 0.0) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  const double h = (12.0 / (n * (n + 1.0)) * acc - 3.0 * (n + 1.0)) / correction;
  res.statistic = std::max(h, 0.0);
  res.p_value = dist::chi2_sf(res.statistic, static_cast<double>(groups.size() - 1));
  return res;
}

std::vector<double> bonferroni(std::span<const double> pvals) {
  const double m = static_cast<double>(pvals.size());
  std::vector<double> out;
  out.reserve(pvals.size());
  for (double p : pvals) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("p-values must lie in [0, 1]");
    out.push_back(std::min(1.0, p * m));
  }
  return out;
}

}  // namespace awpri
