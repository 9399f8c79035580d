#include <doctest.h>

#include <algorithm>
#include <vector>

#include "extrema/errors.hpp"
#include "extrema/series.hpp"
#include "extrema/stats.hpp"

using namespace extrema;

TEST_CASE("iid source draws open uniforms") {
    const auto src = SeriesSource::iid_uniform();
    CHECK(src.is_iid());
    CHECK(src.describe() == "iid-uniform");
    CHECK_THROWS_AS(src.map(), ConfigurationError);
    CHECK_THROWS_AS(src.observable(), ConfigurationError);
    Rng rng(1);
    const auto xs = src.generate(rng, 100000);
    CHECK(*std::min_element(xs.begin(), xs.end()) > 0.0);
    CHECK(*std::max_element(xs.begin(), xs.end()) < 1.0);
    CHECK(ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.001);
}

TEST_CASE("iid stream reproduces the stored series") {
    const auto src = SeriesSource::iid_uniform();
    Rng a(9), b(9);
    const auto xs = src.generate(a, 500);
    auto stream = src.stream(b);
    for (double x : xs) REQUIRE(stream.next() == x);
}

TEST_CASE("orbit source applies the observable to the orbit") {
    const auto obs = Observable::neglog();
    const auto src = SeriesSource::orbit(MapSystem::tent(), obs);
    CHECK(src.mode() == GenerationMode::Pullback);
    CHECK(src.describe() == "tent/neglog/pullback");
    Rng a(4), b(4);
    std::vector<double> states(1000);
    src.generate_states(a, states);
    const auto xs = src.generate(b, 1000);
    for (std::size_t i = 0; i < xs.size(); ++i) REQUIRE(xs[i] == obs.evaluate(states[i]));
}

TEST_CASE("orbit source defaults and validation") {
    CHECK(SeriesSource::orbit(MapSystem::logistic4(), Observable::neglog()).mode() == GenerationMode::Forward);
    CHECK_THROWS_AS(SeriesSource::orbit(MapSystem::lsv(0.5), Observable::neglog(), GenerationMode::Pullback),
                    ConfigurationError);
    CHECK(SeriesSource::orbit(MapSystem::tent(), Observable::neglog(), GenerationMode::Forward).mode() ==
          GenerationMode::Forward);
}

TEST_CASE("streamed and stored series have the same law") {
    // Maximum of the first 1000 values, over independent realizations.
    for (const auto& map : {MapSystem::tent(), MapSystem::doubling(), MapSystem::logistic4()}) {
        const auto src = SeriesSource::orbit(map, Observable::neglog());
        std::vector<double> stored, streamed;
        for (std::uint64_t t = 0; t < 2000; ++t) {
            Rng a(100, t), b(200, t);
            const auto xs = src.generate(a, 1000);
            stored.push_back(*std::max_element(xs.begin(), xs.end()));
            auto s = src.stream(b);
            double m = s.next();
            for (int i = 1; i < 1000; ++i) m = std::max(m, s.next());
            streamed.push_back(m);
        }
        CHECK_MESSAGE(ks_two_sample(stored, streamed).p_value > 0.001, map.name());
    }
}
