#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "extrema/observables.hpp"
#include "extrema/records.hpp"
#include "extrema/series.hpp"
#include "extrema/stats.hpp"

namespace extrema {

/// Everything an experiment needs to know about the simulated system.
struct ExperimentConfig {
    std::string map = "tent";  ///< tent, doubling, logistic4, lsv or iid
    double alpha = 0.5;        ///< LSV parameter
    std::string observable = "neglog";
    double obs_alpha = 1.0;  ///< Pareto / Bounded exponent
    double bound_c = 1.0;    ///< Bounded constant
    double center = kDefaultCenter;
    bool allow_periodic = false;
    std::size_t n = 10000;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::vector<std::pair<double, double>> windows{{0.25, 1.0}};
    std::vector<double> thresholds{1.0};
    std::vector<std::pair<double, double>> value_windows{{0.0, 1.0}};
    std::string output_dir = "extrema-out";
    int threads = 0;   ///< 0: EXTREMA_THREADS or hardware
    std::string mode;  ///< forward, pullback or empty for the map default

    // dprime
    std::vector<std::size_t> k_blocks{10, 100};
    double x_level = 1.0;
    // sample-extremal
    double t_start = 0.05;
    double t_end = 2.0;
    std::string sampler = "jump-chain";
    std::vector<double> probe_times{0.5, 1.0, 2.0};
    // sample-prm
    std::string intensity = "uniform";
    double rate = 1.0;
    double thin_p = 1.0;  ///< 1 disables thinning
};

/// Resolved system: the series source, its limit law and normalization.
struct System {
    SeriesSource source;
    GevLimit limit;
    Scaling scaling;
    double density_at_center = 0.0;
    bool density_approximate = false;
};

/*!
 * Builds the system for cfg at sample size n. The "iid" map is the iid
 * Uniform(0,1) null model with limit Weibull(1) under a = n, b = 1.
 * Throws ConfigurationError for a periodic center unless allow_periodic.
 */
System make_system(const ExperimentConfig& cfg, std::size_t n);

/// One line of a test report.
struct TestRecord {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool pass = true;
};

struct MaxResult {
    std::vector<double> samples;  ///< a_n (M_n - b_n), one per trial
    TestResult ks;
};

/// Per-trial rescaled maximum Y_n(1) and a KS test against the limit law.
MaxResult run_max_experiment(const System& sys, std::size_t n, std::size_t trials, std::uint64_t seed,
                             unsigned threads);

struct WindowCounts {
    double a = 0.0;
    double b = 0.0;
    double expected = 0.0;  ///< intensity mass of the window
    std::vector<long> counts;
    double void_fraction = 0.0;
    double void_predicted = 0.0;
    PoissonTestResult test;
};

struct WDiagnostics {
    std::size_t n = 0;
    double mean_w = 0.0;
    double std_error = 0.0;
    double harmonic = 0.0;
    double mean_w_over_log = 0.0;
    double median_tau10_root = 0.0;  ///< median of tau_10^(1/10); inf if most trials lack 10 records
    std::vector<WCheckpoint> mean_checkpoints;  ///< counts hold rounded means
    std::vector<double> checkpoint_means;
};

struct RecordsResult {
    std::vector<RecordSummary> summaries;  ///< one per trial, records up to the scan end
    double mean_scan_length = 0.0;         ///< in units of n
    std::size_t truncated_trials = 0;      ///< scans that hit the length cap first
    std::vector<WindowCounts> time_windows;
    std::vector<WindowCounts> value_windows;
    WDiagnostics w;
};

/*!
 * Record-time counts R_n(a, b], record-value counts V_n(lo, hi], and W_n.
 * Each trial scans one orbit until time max(b) n has passed and the running
 * maximum exceeds the top value window edge, or until the scan cap where
 * G^T(hi) <= 1e-9 (T in units of n).
 */
RecordsResult run_records_experiment(const System& sys, std::size_t n, std::size_t trials,
                                     const std::vector<std::pair<double, double>>& time_windows,
                                     const std::vector<std::pair<double, double>>& value_windows,
                                     std::uint64_t seed, unsigned threads, bool keep_summaries = true);

/// W_n statistics only; cheaper than the full records experiment.
WDiagnostics run_w_diagnostics(const SeriesSource& source, std::size_t n, std::size_t trials, std::uint64_t seed,
                               unsigned threads);

struct XiLevel {
    double u = 0.0;
    double expected = 0.0;  ///< Q(u)
    std::vector<long> full;
    std::vector<long> first_half;
    std::vector<long> second_half;
    PoissonTestResult test;
    double correlation = 0.0;
    double mean_relative_error = 0.0;  ///< |mean count / Q(u) - 1|
    double union_void = 0.0;           ///< (0,.5]x(u,inf) u (.5,1]x(u+1,inf) empty
    double union_void_predicted = 0.0;
};

/// Counts of the planar process xi_n above each level u on (0, 1].
std::vector<XiLevel> run_xi_experiment(const System& sys, std::size_t n, std::size_t trials,
                                       const std::vector<double>& levels, std::uint64_t seed, unsigned threads);

struct SamplerComparison {
    std::vector<double> times;
    std::vector<TestResult> ks;  ///< two-sample KS at each time
    std::vector<long> jump_counts;
    double jump_window_lo = 0.0;
    double jump_window_hi = 0.0;
    PoissonTestResult jump_test;
};

/// Jump-chain sampler vs H1 of the planar PRM at fixed times; jump counts
/// of the jump-chain paths on (probe_lo, probe_hi] vs Poisson(log ratio).
SamplerComparison compare_extremal_samplers(const GevLimit& g, double t_start, const std::vector<double>& times,
                                            std::size_t paths, std::uint64_t seed, unsigned threads);

/// Counts of thinned UniformRate(rate) patterns on (lo, hi].
std::vector<long> thinned_counts(double rate, double lo, double hi, double p, std::size_t samples,
                                 std::uint64_t seed, unsigned threads);

/*!
 * Fixed property suite used by `selftest`. Output depends only on seed:
 * trial streams are per index, so any thread count gives the same report.
 */
std::vector<TestRecord> run_selftest(std::uint64_t seed, unsigned threads);

}  // namespace extrema
