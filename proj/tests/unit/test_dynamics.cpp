#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "extrema/dynamics.hpp"
#include "extrema/errors.hpp"
#include "extrema/stats.hpp"
#include "support/oracles.hpp"

using namespace extrema;

TEST_CASE("step matches the map formulas") {
    CHECK(MapSystem::tent().step(0.25) == 0.5);
    CHECK(MapSystem::lsv(0.5).step(0.5) == 0.0);
    CHECK(MapSystem::logistic4().step(0.5) == 1.0);
    CHECK(MapSystem::doubling().step(0.75) == doctest::Approx(0.5));
    CHECK(MapSystem::lsv(0.5).step(0.25) == doctest::Approx(0.25 * (1.0 + std::sqrt(2.0) * 0.5)));
    CHECK(MapSystem::tent().step(1.0) == 0.0);
}

TEST_CASE("step rejects states outside the unit interval") {
    CHECK_THROWS_AS(MapSystem::tent().step(1.5), InputError);
    CHECK_THROWS_AS(MapSystem::logistic4().step(-0.1), InputError);
    CHECK_THROWS_AS(MapSystem::tent().step(std::nan("")), InputError);
}

TEST_CASE("lsv parameter must lie strictly inside (0, 1)") {
    CHECK_THROWS(MapSystem::lsv(0.0));
    CHECK_THROWS(MapSystem::lsv(1.0));
    CHECK_THROWS(MapSystem::lsv(-0.5));
    CHECK_NOTHROW(MapSystem::lsv(0.3));
}

TEST_CASE("every map sends [0, 1] into [0, 1]") {
    for (const auto& map : {MapSystem::tent(), MapSystem::doubling(), MapSystem::logistic4(), MapSystem::lsv(0.3),
                            MapSystem::lsv(0.9)}) {
        for (int i = 0; i <= 10000; ++i) {
            const double y = map.step(i / 10000.0);
            REQUIRE(y >= 0.0);
            REQUIRE(y <= 1.0);
        }
    }
}

TEST_CASE("map names round-trip") {
    CHECK(MapSystem::from_name("tent").kind() == MapKind::Tent);
    CHECK(MapSystem::from_name("logistic").kind() == MapKind::Logistic4);
    CHECK(MapSystem::from_name("lsv", 0.25).alpha() == 0.25);
    CHECK_THROWS_AS(MapSystem::from_name("henon"), ConfigurationError);
}

TEST_CASE("pullback is only available for the dyadic maps") {
    OrbitSpec spec{100, 0, 1, GenerationMode::Pullback};
    CHECK_THROWS_AS(sample_orbit(MapSystem::logistic4(), spec), ConfigurationError);
    CHECK_THROWS_AS(sample_orbit(MapSystem::lsv(0.5), spec), ConfigurationError);
    CHECK_NOTHROW(sample_orbit(MapSystem::tent(), spec));
    spec.length = 0;
    CHECK_THROWS_AS(sample_orbit(MapSystem::tent(), spec), ConfigurationError);
}

TEST_CASE("pullback orbit of length one is a single unit-interval sample") {
    const auto xs = sample_orbit(MapSystem::doubling(), {1, 0, 9, GenerationMode::Pullback});
    REQUIRE(xs.size() == 1);
    CHECK(xs[0] >= 0.0);
    CHECK(xs[0] <= 1.0);
}

TEST_CASE("pullback orbits are orbits") {
    for (const auto& map : {MapSystem::tent(), MapSystem::doubling()}) {
        const auto xs = sample_orbit(map, {5000, 0, 3, GenerationMode::Pullback});
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) REQUIRE(std::abs(map.step(xs[i]) - xs[i + 1]) <= 1e-15);
    }
}

TEST_CASE("naive forward doubling collapses to 0, pullback does not") {
    Rng rng(5);
    int absorbed = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto xs = naive_forward_orbit(MapSystem::doubling(), rng.uniform(), 60);
        if (xs.back() == 0.0) ++absorbed;
    }
    CHECK(absorbed == 100);

    const auto long_orbit = sample_orbit(MapSystem::doubling(), {1'000'000, 0, 5, GenerationMode::Pullback});
    CHECK(std::count(long_orbit.begin(), long_orbit.end(), 0.0) == 0);
    const auto tail = std::vector<double>(long_orbit.end() - 1000, long_orbit.end());
    CHECK(*std::max_element(tail.begin(), tail.end()) > 0.9);
}

TEST_CASE("forward logistic and lsv orbits stay off the absorbing states") {
    for (const auto& map : {MapSystem::logistic4(), MapSystem::lsv(0.5)}) {
        OrbitSpec spec{200000, map.kind() == MapKind::Lsv ? kLsvBurnIn : 0, 2, GenerationMode::Forward};
        const auto xs = sample_orbit(map, spec);
        const auto tail = std::vector<double>(xs.end() - 1000, xs.end());
        CHECK(*std::max_element(tail.begin(), tail.end()) > 0.5);
    }
}

TEST_CASE("orbits are reproducible from the seed") {
    const OrbitSpec spec{1000, 0, 77, GenerationMode::Pullback};
    CHECK(sample_orbit(MapSystem::tent(), spec) == sample_orbit(MapSystem::tent(), spec));
    const OrbitSpec other{1000, 0, 78, GenerationMode::Pullback};
    CHECK(sample_orbit(MapSystem::tent(), spec) != sample_orbit(MapSystem::tent(), other));
}

TEST_CASE("invariant densities") {
    CHECK(invariant_density(MapSystem::tent(), 0.3).value == 1.0);
    CHECK(invariant_density(MapSystem::doubling(), 0.9).value == 1.0);
    CHECK(invariant_density(MapSystem::logistic4(), 0.5).value == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(std::isinf(invariant_density(MapSystem::logistic4(), 0.0).value));
    CHECK(std::isinf(invariant_density(MapSystem::lsv(0.5), 1e-4).value));
    CHECK(invariant_density(MapSystem::lsv(0.5), 0.7).approximate);
    CHECK_FALSE(invariant_density(MapSystem::tent(), 0.7).approximate);
}

TEST_CASE("logistic density closed form agrees with an orbit histogram") {
    // Own histogram of a long forward orbit, bin [0.495, 0.505).
    Rng rng(2024);
    const auto xs = sample_orbit(MapSystem::logistic4(), {20'000'000, 0, 0, GenerationMode::Forward}, rng);
    double in_bin = 0.0;
    for (double x : xs)
        if (x >= 0.495 && x < 0.505) in_bin += 1.0;
    const double estimate = in_bin / static_cast<double>(xs.size()) / 0.01;
    CHECK(estimate == doctest::Approx(2.0 / std::numbers::pi).epsilon(0.01));
}

TEST_CASE("lsv density table is normalised") {
    const auto map = MapSystem::lsv(0.5);
    double total = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = (i + 0.5) / 1000.0;
        if (x < kLsvSingularCutoff) continue;
        total += invariant_density(map, x).value / 1000.0;
    }
    // Mass below the cutoff is small but not zero.
    CHECK(total > 0.9);
    CHECK(total <= 1.0 + 1e-9);
}

TEST_CASE("initial samples follow the invariant laws") {
    SUBCASE("tent: uniform, chi-square over 20 cells") {
        Rng rng(11);
        std::vector<double> cells(20, 0.0);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) cells[std::min(19, static_cast<int>(initial_sample(MapSystem::tent(), rng) * 20))] += 1.0;
        double chi2 = 0.0;
        for (double c : cells) chi2 += (c - draws / 20.0) * (c - draws / 20.0) / (draws / 20.0);
        CHECK(chi2 < 43.8);  // 0.999 quantile of chi-square(19)
    }
    SUBCASE("logistic: arcsine law") {
        Rng rng(12);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = initial_sample(MapSystem::logistic4(), rng);
        CHECK(ks_statistic(xs, oracle::arcsine_cdf).statistic < 0.01);
    }
    SUBCASE("lsv: mean stable across seeds") {
        auto mean_of = [](std::uint64_t seed) {
            Rng rng(seed);
            double s = 0.0;
            for (int i = 0; i < 100000; ++i) s += initial_sample(MapSystem::lsv(0.3), rng);
            return s / 100000.0;
        };
        const double m1 = mean_of(1), m2 = mean_of(2);
        CHECK(std::abs(m1 - m2) / m1 < 0.01);
    }
}

TEST_CASE("pullback marginals are uniform at every position") {
    const std::size_t n = 1000;
    std::vector<double> first, middle, last;
    Rng rng(31);
    for (int t = 0; t < 10000; ++t) {
        std::vector<double> xs(n);
        fill_orbit(MapSystem::tent(), GenerationMode::Pullback, 0, rng, xs);
        first.push_back(xs[0]);
        middle.push_back(xs[n / 2]);
        last.push_back(xs[n - 1]);
    }
    auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic(first, uniform).statistic < 0.02);
    CHECK(ks_statistic(middle, uniform).statistic < 0.02);
    CHECK(ks_statistic(last, uniform).statistic < 0.02);
}

TEST_CASE("step preserves the invariant measure") {
    for (const auto& map : {MapSystem::tent(), MapSystem::doubling(), MapSystem::logistic4(), MapSystem::lsv(0.4)}) {
        Rng rng(41);
        std::vector<double> before(100000), after(100000);
        for (std::size_t i = 0; i < before.size(); ++i) {
            before[i] = initial_sample(map, rng);
        }
        Rng other(42);
        for (std::size_t i = 0; i < after.size(); ++i) after[i] = map.step(initial_sample(map, other));
        CHECK_MESSAGE(ks_two_sample(before, after).p_value > 0.01, map.name());
    }
}

TEST_CASE("streamed orbits are orbits with the invariant marginal") {
    for (const auto& map : {MapSystem::tent(), MapSystem::doubling()}) {
        Rng rng(51);
        OrbitStream stream(map, GenerationMode::Pullback, 0, rng);
        std::vector<double> xs(200000);
        for (auto& x : xs) x = stream.next();
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) REQUIRE(std::abs(map.step(xs[i]) - xs[i + 1]) <= 1e-15);
        std::vector<double> thinned;
        for (std::size_t i = 0; i < xs.size(); i += 20) thinned.push_back(xs[i]);
        CHECK(ks_statistic(thinned, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.001);
    }
    Rng rng(52);
    OrbitStream logistic(MapSystem::logistic4(), GenerationMode::Forward, 0, rng);
    double x = logistic.next();
    for (int i = 0; i < 100; ++i) {
        const double y = logistic.next();
        CHECK(y == doctest::Approx(MapSystem::logistic4().step(x)));
        x = y;
    }
    CHECK_THROWS_AS(OrbitStream(MapSystem::logistic4(), GenerationMode::Pullback, 0, rng), ConfigurationError);
}

TEST_CASE("periodic point detection") {
    CHECK(is_periodic_point(MapSystem::doubling(), 0.0));
    CHECK(is_periodic_point(MapSystem::doubling(), 1.0 / 3.0));
    CHECK(is_periodic_point(MapSystem::tent(), 2.0 / 3.0));
    CHECK_FALSE(is_periodic_point(MapSystem::tent(), 1.0 / std::sqrt(2.0)));
    CHECK_FALSE(is_periodic_point(MapSystem::logistic4(), 1.0 / std::sqrt(2.0)));
}
