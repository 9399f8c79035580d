#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "extrema/errors.hpp"
#include "extrema/parallel.hpp"
#include "extrema/stats.hpp"

using namespace extrema;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("ecdf") {
    const Ecdf f({3.0, 1.0, 2.0, 2.0});
    CHECK(f(0.5) == 0.0);
    CHECK(f(1.0) == 0.25);
    CHECK(f(2.0) == 0.75);
    CHECK(f(10.0) == 1.0);
    CHECK(f.sorted() == std::vector<double>{1.0, 2.0, 2.0, 3.0});
}

TEST_CASE("kolmogorov survival") {
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(0.01));
    CHECK(kolmogorov_survival(1.63) == doctest::Approx(0.0098).epsilon(0.02));
    CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("KS on exact quantiles") {
    const std::size_t n = 999;
    std::vector<double> xs;
    for (std::size_t i = 1; i <= n; ++i) xs.push_back(static_cast<double>(i) / (n + 1));
    const auto r = ks_statistic(xs, uniform_cdf);
    CHECK(r.statistic <= 1.0 / (n + 1) + 1e-12);
    CHECK(r.p_value > 0.99);
    CHECK_THROWS_AS(ks_statistic(std::vector<double>(10, 0.5), uniform_cdf), InputError);
}

TEST_CASE("two-sample KS") {
    std::vector<double> a;
    for (int i = 0; i < 100; ++i) a.push_back(i * 0.37);
    const auto same = ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    std::vector<double> shifted = a;
    for (auto& v : shifted) v += 100.0;
    CHECK(ks_two_sample(a, shifted).statistic == 1.0);
    CHECK(ks_two_sample(a, shifted).p_value < 1e-10);
}

TEST_CASE("KS is invariant under a joint increasing transform") {
    Rng rng(1);
    std::vector<double> xs(500), ex(500);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = rng.uniform();
        ex[i] = std::exp(xs[i]);
    }
    const auto a = ks_statistic(xs, uniform_cdf);
    const auto b = ks_statistic(ex, [](double y) { return uniform_cdf(std::log(y)); });
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-12));
}

TEST_CASE("KS p-values are uniform under the null") {
    const auto g = GevLimit::gumbel(2.0);
    const auto ps = map_trials<double>(200, 2, resolve_threads(), [&](std::size_t, Rng& rng) {
        std::vector<double> ys(10000);
        for (auto& y : ys) y = g.quantile(rng.uniform_open());
        return ks_statistic(ys, [&](double y) { return g.cdf(y); }).p_value;
    });
    CHECK(ks_statistic(ps, uniform_cdf).p_value > 0.05);
}

TEST_CASE("poisson test on degenerate counts") {
    const std::vector<long> zeros(500, 0);
    CHECK(poisson_count_test(zeros, 1e-6).p_value == doctest::Approx(1.0));
    CHECK_THROWS_AS(poisson_count_test(zeros, 0.0), InputError);
    CHECK_THROWS_AS(poisson_count_test(std::vector<long>(100, 1), 1.0), InputError);
}

TEST_CASE("poisson test cells expect at least five") {
    Rng rng(3);
    std::vector<long> c(1000);
    for (auto& v : c) v = rng.poisson(3.0);
    const auto r = poisson_count_test(c, 3.0);
    for (double e : r.expected) CHECK(e >= kMinExpectedPerCell);
    CHECK(r.dof == static_cast<int>(r.expected.size()) - 1);
    double total = 0.0;
    for (double e : r.expected) total += e;
    CHECK(total == doctest::Approx(1000.0));
}

TEST_CASE("poisson test calibration and power") {
    SUBCASE("p-values uniform under the null") {
        const auto ps = map_trials<double>(200, 4, resolve_threads(), [](std::size_t, Rng& rng) {
            std::vector<long> c(2000);
            for (auto& v : c) v = rng.poisson(1.0);
            return poisson_count_test(c, 1.0).p_value;
        });
        CHECK(ks_statistic(ps, uniform_cdf).p_value > 0.01);
    }
    SUBCASE("rejection rate at level 0.01") {
        const auto rejected = map_trials<int>(2000, 5, resolve_threads(), [](std::size_t, Rng& rng) {
            std::vector<long> c(1000);
            for (auto& v : c) v = rng.poisson(2.0);
            return poisson_count_test(c, 2.0).p_value < 0.01 ? 1 : 0;
        });
        double rate = 0.0;
        for (int r : rejected) rate += r;
        CHECK(std::abs(rate / 2000.0 - 0.01) < 0.005);
    }
    SUBCASE("Poisson(2) counts against mean 1") {
        Rng rng(6);
        std::vector<long> c(10000);
        for (auto& v : c) v = rng.poisson(2.0);
        CHECK(poisson_count_test(c, 1.0).p_value < 0.001);
    }
}

TEST_CASE("moments and correlation") {
    const std::vector<double> xs{1, 2, 3, 4}, ys{2, 4, 6, 8}, zs{4, 3, 2, 1};
    CHECK(mean(xs) == 2.5);
    CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
    CHECK(pearson_correlation(xs, ys) == doctest::Approx(1.0));
    CHECK(pearson_correlation(xs, zs) == doctest::Approx(-1.0));
}

TEST_CASE("exceedance threshold") {
    const auto g = GevLimit::gumbel(2.0);
    const Scaling s{1.0, std::log(1000.0)};
    CHECK(exceedance_threshold(g, s, 1.0) == doctest::Approx(std::log(2.0) + std::log(1000.0)));
    // iid uniform: u = 1 - x / n.
    CHECK(exceedance_threshold(GevLimit::weibull(1.0, 1.0), {1000.0, 1.0}, 0.5) == doctest::Approx(1.0 - 0.5 / 1000.0));
}

TEST_CASE("D' for iid uniforms is x^2 / k") {
    const std::size_t n = 100000, k = 10;
    const double u = 1.0 - 1.0 / static_cast<double>(n);
    const auto r = dprime_estimate(SeriesSource::iid_uniform(), u, n, k, 2000, 7, resolve_threads());
    CHECK(r.lags == n / k);
    CHECK(std::abs(r.estimate - 0.1) < 0.03);
    CHECK(r.std_error > 0.0);
}

TEST_CASE("D' input checks") {
    CHECK_THROWS_AS(dprime_estimate(SeriesSource::iid_uniform(), 0.5, 10, 10, 10, 1), InputError);
    CHECK_THROWS_AS(dprime_estimate(SeriesSource::iid_uniform(), 2.0, 1000, 10, 10, 1), InputError);
    CHECK_THROWS_AS(dprime_estimate(SeriesSource::iid_uniform(), -1.0, 1000, 10, 10, 1), InputError);
}

TEST_CASE("D' shrinks with k away from periodic points and not at them") {
    const std::size_t n = 20000;
    const auto g = GevLimit::gumbel(2.0);
    const auto obs = Observable::neglog();
    const double u = exceedance_threshold(g, obs.scaling(n), 1.0);
    const auto src = SeriesSource::orbit(MapSystem::doubling(), obs);
    const auto k10 = dprime_estimate(src, u, n, 10, 400, 8, resolve_threads());
    const auto k100 = dprime_estimate(src, u, n, 100, 400, 8, resolve_threads());
    CHECK(k10.estimate / k100.estimate > 5.0);
    CHECK(k10.estimate / k100.estimate < 20.0);

    const auto fixed = Observable::neglog(0.0);
    const auto fixed_src = SeriesSource::orbit(MapSystem::doubling(), fixed);
    // One-sided ball at 0: theta = rho = 1.
    const double u0 = exceedance_threshold(GevLimit::gumbel(1.0), fixed.scaling(n), 1.0);
    const auto p10 = dprime_estimate(fixed_src, u0, n, 10, 400, 9, resolve_threads());
    const auto p100 = dprime_estimate(fixed_src, u0, n, 100, 400, 9, resolve_threads());
    CHECK(p10.estimate > 0.4);
    CHECK(p100.estimate > 0.4);
}

TEST_CASE("block independence predictions") {
    const auto src = SeriesSource::iid_uniform();
    const auto g = GevLimit::weibull(1.0, 1.0);
    const std::size_t n = 1000;
    const Scaling s{static_cast<double>(n), 1.0};
    const std::vector<std::pair<double, double>> one{{0.0, 1.0}};
    const std::vector<double> x1{1.0};
    const auto r1 = block_independence_test(src, g, s, one, x1, n, 2000, 10);
    CHECK(r1.joint_predicted == doctest::Approx(std::exp(-1.0)));
    CHECK(std::abs(r1.joint_empirical - r1.joint_predicted) < 0.04);

    const std::vector<std::pair<double, double>> two{{0.0, 0.5}, {0.5, 1.0}};
    const std::vector<double> x2{1.0, 1.0};
    const auto r2 = block_independence_test(src, g, s, two, x2, n, 2000, 11);
    CHECK(r2.joint_predicted == doctest::Approx(std::exp(-1.0)));
    REQUIRE(r2.rows.size() == 2);
    CHECK(r2.rows[0].predicted == doctest::Approx(std::exp(-0.5)));

    const std::vector<std::pair<double, double>> overlap{{0.0, 0.6}, {0.5, 1.0}};
    CHECK_THROWS_AS(block_independence_test(src, g, s, overlap, x2, n, 10, 1), InputError);
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(block_independence_test(src, g, s, two, bad, n, 10, 1), InputError);
}

TEST_CASE("results are reproducible from the seed") {
    const auto src = SeriesSource::orbit(MapSystem::tent(), Observable::neglog());
    const auto g = GevLimit::gumbel(2.0);
    const auto s = Observable::neglog().scaling(5000);
    const std::vector<std::pair<double, double>> iv{{0.0, 0.4}, {0.5, 0.9}};
    const std::vector<double> xs{1.0, 2.0};
    const auto a = block_independence_test(src, g, s, iv, xs, 5000, 300, 12, 1);
    const auto b = block_independence_test(src, g, s, iv, xs, 5000, 300, 12, 4);
    CHECK(a.joint_empirical == b.joint_empirical);
    const double u = exceedance_threshold(g, s, 1.0);
    CHECK(dprime_estimate(src, u, 5000, 10, 50, 13, 1).estimate == dprime_estimate(src, u, 5000, 10, 50, 13, 3).estimate);
}
