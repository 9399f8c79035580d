#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "extrema/observables.hpp"
#include "extrema/series.hpp"

namespace extrema {

/// Minimum sample size accepted by the KS routines.
inline constexpr std::size_t kMinKsSamples = 30;
/// Minimum number of counts accepted by poisson_count_test.
inline constexpr std::size_t kMinPoissonCounts = 200;
/// Chi-square cells are merged until each expects at least this many.
inline constexpr double kMinExpectedPerCell = 5.0;

class Ecdf {
  public:
    explicit Ecdf(std::vector<double> samples);
    /// Fraction of samples <= x.
    double operator()(double x) const noexcept;
    const std::vector<double>& sorted() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }

  private:
    std::vector<double> sorted_;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample KS distance and asymptotic p-value (Stephens' small-n
/// correction). Throws InputError for fewer than kMinKsSamples samples.
TestResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS with effective size nm/(n+m).
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct PoissonTestResult {
    double chi2 = 0.0;
    double p_value = 1.0;
    int dof = 0;
    std::vector<long> cell_starts;  ///< first count value of each merged cell
    std::vector<double> observed;
    std::vector<double> expected;
};

/// Pearson chi-square of integer counts against Poisson(mean), with
/// neighbouring cells merged until each expects >= 5.
/// Throws InputError for fewer than 200 counts or mean <= 0.
PoissonTestResult poisson_count_test(std::span<const long> counts, double mean);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Threshold u_n(x) = Q^-1(x) / a_n + b_n, so that n mu{X > u_n} -> x.
double exceedance_threshold(const GevLimit& g, Scaling scaling, double x);

struct DprimeResult {
    double estimate = 0.0;
    double std_error = 0.0;          ///< trial-level bootstrap
    double exceedance_rate = 0.0;    ///< fraction of X_i > u
    std::size_t lags = 0;            ///< floor(n / k_block)
};

/*!
 * Short-return diagnostic n * sum_{j=2}^{floor(n/k)} mu{X_1 > u, X_j > u}.
 *
 * Each trial scans a fresh stationary segment of length n + floor(n/k) - 1
 * and counts ordered exceedance pairs (i, i + d), i < n, 1 <= d < n/k;
 * that count is the trial's estimate (the time average over i multiplied
 * by n). Throws InputError if n/k < 2 or if no sample exceeds u or every
 * sample does.
 */
DprimeResult dprime_estimate(const SeriesSource& source, double u, std::size_t n, std::size_t k_block,
                             std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct BlockRow {
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double threshold = 0.0;
    double empirical = 0.0;  ///< P(M(n [a, b)) <= threshold)
    double predicted = 0.0;  ///< exp(-x (b - a))
};

struct BlockIndependenceResult {
    std::vector<BlockRow> rows;
    double joint_empirical = 0.0;
    double joint_predicted = 0.0;
    double std_error = 0.0;  ///< binomial standard error of joint_empirical
    std::size_t n = 0;
    std::size_t trials = 0;
};

/*!
 * Joint non-exceedance of block maxima over disjoint time intervals
 * [a_j, b_j) (in units of n) at thresholds u_n(x_j), against the
 * product prediction prod_j exp(-x_j (b_j - a_j)).
 * Throws InputError for overlapping intervals or x_j <= 0.
 */
BlockIndependenceResult block_independence_test(const SeriesSource& source, const GevLimit& g, Scaling scaling,
                                                std::span<const std::pair<double, double>> intervals,
                                                std::span<const double> x_levels, std::size_t n,
                                                std::size_t trials, std::uint64_t seed, unsigned threads = 1);

}  // namespace extrema
