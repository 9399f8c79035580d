#include "extrema/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>

#include "extrema/errors.hpp"
#include "extrema/parallel.hpp"
#include "extrema/step_path.hpp"

namespace extrema {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw InputError("ecdf of an empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const noexcept {
    const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(k) / static_cast<double>(sorted_.size());
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;  // series converges slowly; value is 1 to 1e-15
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double n_eff) {
    const double root = std::sqrt(n_eff);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

TestResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < kMinKsSamples) {
        throw InputError("KS test needs at least " + std::to_string(kMinKsSamples) + " samples");
    }
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, ks_p_value(d, n)};
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < kMinKsSamples || b.size() < kMinKsSamples) {
        throw InputError("two-sample KS test needs at least " + std::to_string(kMinKsSamples) + " samples each");
    }
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double na = static_cast<double>(xs.size());
    const double nb = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p_value(d, na * nb / (na + nb))};
}

PoissonTestResult poisson_count_test(std::span<const long> counts, double mean_count) {
    if (counts.size() < kMinPoissonCounts) {
        throw InputError("poisson_count_test needs at least " + std::to_string(kMinPoissonCounts) + " counts");
    }
    if (!(mean_count > 0.0) || !std::isfinite(mean_count)) {
        throw InputError("poisson_count_test needs a positive mean");
    }
    const boost::math::poisson_distribution<double> dist(mean_count);
    const double total = static_cast<double>(counts.size());
    long max_obs = 0;
    for (long c : counts) {
        if (c < 0) throw InputError("counts must be nonnegative");
        max_obs = std::max(max_obs, c);
    }
    std::vector<double> hist(static_cast<std::size_t>(max_obs) + 1, 0.0);
    for (long c : counts) hist[static_cast<std::size_t>(c)] += 1.0;
    auto observed_from = [&](long k) {
        double s = 0.0;
        for (std::size_t i = static_cast<std::size_t>(std::max(0L, k)); i < hist.size(); ++i) s += hist[i];
        return s;
    };

    PoissonTestResult r;
    long start = 0;
    double cell_exp = 0.0, cell_obs = 0.0;
    for (long k = 0;; ++k) {
        cell_exp += total * boost::math::pdf(dist, static_cast<double>(k));
        cell_obs += k <= max_obs ? hist[static_cast<std::size_t>(k)] : 0.0;
        const double tail_exp = total * boost::math::cdf(boost::math::complement(dist, static_cast<double>(k)));
        if (tail_exp < kMinExpectedPerCell) {
            // Everything above k joins the current cell.
            r.cell_starts.push_back(start);
            r.expected.push_back(cell_exp + tail_exp);
            r.observed.push_back(cell_obs + observed_from(k + 1));
            break;
        }
        if (cell_exp >= kMinExpectedPerCell) {
            r.cell_starts.push_back(start);
            r.expected.push_back(cell_exp);
            r.observed.push_back(cell_obs);
            start = k + 1;
            cell_exp = cell_obs = 0.0;
        }
    }
    // A short final cell (only possible if the tail cell came in under 5) is merged back.
    if (r.expected.size() >= 2 && r.expected.back() < kMinExpectedPerCell) {
        r.expected[r.expected.size() - 2] += r.expected.back();
        r.observed[r.observed.size() - 2] += r.observed.back();
        r.expected.pop_back();
        r.observed.pop_back();
        r.cell_starts.pop_back();
    }
    for (std::size_t c = 0; c < r.expected.size(); ++c) {
        const double diff = r.observed[c] - r.expected[c];
        r.chi2 += diff * diff / r.expected[c];
    }
    r.dof = static_cast<int>(r.expected.size()) - 1;
    r.p_value = r.dof >= 1 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.chi2) : 1.0;
    return r;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw InputError("mean of an empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw InputError("variance needs at least two samples");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InputError("correlation needs two equal samples");
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double exceedance_threshold(const GevLimit& g, Scaling scaling, double x) {
    if (!(x > 0.0)) throw InputError("exceedance level x must be positive");
    return g.Q_inverse(x) / scaling.a + scaling.b;
}

DprimeResult dprime_estimate(const SeriesSource& source, double u, std::size_t n, std::size_t k_block,
                             std::size_t trials, std::uint64_t seed, unsigned threads) {
    if (k_block == 0 || n / k_block < 2) throw InputError("dprime needs n / k_block >= 2");
    if (trials < 2) throw InputError("dprime needs at least two trials");
    const std::size_t lags = n / k_block;
    const std::size_t length = n + lags - 1;

    struct TrialOut {
        double pairs = 0.0;
        double exceedances = 0.0;
    };
    const auto per_trial = map_trials<TrialOut>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        thread_local std::vector<double> xs, scratch;
        xs.resize(length);
        source.generate(rng, xs, scratch);
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < length; ++i)
            if (xs[i] > u) hits.push_back(i);
        TrialOut out;
        std::size_t hi = 0;
        for (std::size_t a = 0; a < hits.size() && hits[a] < n; ++a) {
            out.exceedances += 1.0;
            hi = std::max(hi, a + 1);
            while (hi < hits.size() && hits[hi] - hits[a] <= lags) ++hi;
            out.pairs += static_cast<double>(hi - a - 1);
        }
        return out;
    });

    std::vector<double> estimates(trials);
    double exceed = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        estimates[t] = per_trial[t].pairs;
        exceed += per_trial[t].exceedances;
    }
    const double rate = exceed / (static_cast<double>(trials) * static_cast<double>(n));
    if (rate <= 0.0 || rate >= 1.0) {
        throw InputError("degenerate threshold: exceedance fraction is " + format_double(rate));
    }
    DprimeResult r;
    r.estimate = mean(estimates);
    r.exceedance_rate = rate;
    r.lags = lags;

    constexpr int kBootstrap = 200;
    Rng boot(seed ^ 0xb0075744a9ULL);
    std::vector<double> means(kBootstrap);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t t = 0; t < trials; ++t) s += estimates[static_cast<std::size_t>(boot() % trials)];
        m = s / static_cast<double>(trials);
    }
    r.std_error = std::sqrt(sample_variance(means));
    return r;
}

BlockIndependenceResult block_independence_test(const SeriesSource& source, const GevLimit& g, Scaling scaling,
                                                std::span<const std::pair<double, double>> intervals,
                                                std::span<const double> x_levels, std::size_t n,
                                                std::size_t trials, std::uint64_t seed, unsigned threads) {
    if (intervals.empty() || intervals.size() != x_levels.size()) {
        throw InputError("block test needs one x level per interval");
    }
    if (n == 0 || trials == 0) throw InputError("block test needs n >= 1 and trials >= 1");
    std::vector<std::size_t> order(intervals.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return intervals[i].first < intervals[j].first; });
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto [a, b] = intervals[order[k]];
        if (!(a >= 0.0 && a < b)) throw InputError("block intervals need 0 <= a < b");
        if (k > 0 && a < intervals[order[k - 1]].second) throw InputError("block intervals overlap");
    }
    BlockIndependenceResult res;
    res.n = n;
    res.trials = trials;
    res.joint_predicted = 1.0;
    const double nd = static_cast<double>(n);
    struct Block {
        std::size_t lo, hi;
        double u;
    };
    std::vector<Block> blocks;
    std::size_t length = 0;
    for (std::size_t j = 0; j < intervals.size(); ++j) {
        const auto [a, b] = intervals[j];
        const double x = x_levels[j];
        if (!(x > 0.0)) throw InputError("block x levels must be positive");
        BlockRow row;
        row.a = a;
        row.b = b;
        row.x = x;
        row.threshold = exceedance_threshold(g, scaling, x);
        row.predicted = std::exp(-x * (b - a));
        res.joint_predicted *= row.predicted;
        res.rows.push_back(row);
        const auto lo = static_cast<std::size_t>(std::ceil(nd * a - 1e-9));
        const auto hi = static_cast<std::size_t>(std::ceil(nd * b - 1e-9));
        blocks.push_back({lo, hi, row.threshold});
        length = std::max(length, hi);
    }

    // Per trial: bit j set if block j stayed below its threshold.
    const auto masks = map_trials<unsigned long>(trials, seed, threads, [&](std::size_t, Rng& rng) {
        thread_local std::vector<double> xs, scratch;
        xs.resize(length);
        source.generate(rng, xs, scratch);
        unsigned long mask = 0;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            const auto& blk = blocks[j];
            const double m = *std::max_element(xs.begin() + static_cast<std::ptrdiff_t>(blk.lo),
                                               xs.begin() + static_cast<std::ptrdiff_t>(blk.hi));
            if (m <= blk.u) mask |= (1UL << j);
        }
        return mask;
    });
    const unsigned long all = (1UL << blocks.size()) - 1;
    double joint = 0.0;
    std::vector<double> marginal(blocks.size(), 0.0);
    for (unsigned long m : masks) {
        if (m == all) joint += 1.0;
        for (std::size_t j = 0; j < blocks.size(); ++j)
            if (m & (1UL << j)) marginal[j] += 1.0;
    }
    const double tr = static_cast<double>(trials);
    res.joint_empirical = joint / tr;
    for (std::size_t j = 0; j < blocks.size(); ++j) res.rows[j].empirical = marginal[j] / tr;
    res.std_error = std::sqrt(res.joint_empirical * (1.0 - res.joint_empirical) / tr);
    return res;
}

}  // namespace extrema
