#include <doctest.h>

#include <sstream>
#include <vector>

#include "extrema/errors.hpp"
#include "extrema/point_pattern.hpp"

using namespace extrema;

TEST_CASE("intervals are half-open") {
    const Interval iv{0.5, 1.0};
    CHECK_FALSE(iv.contains(0.5));
    CHECK(iv.contains(1.0));
    CHECK(iv.length() == 0.5);
    const Rect r{{0.0, 1.0}, {2.0, kPlusInf}};
    CHECK(r.contains(1.0, 3.0));
    CHECK_FALSE(r.contains(1.0, 2.0));
}

TEST_CASE("1d pattern sorts and counts") {
    const PointPattern1D p({0.0, 2.0}, {1.5, 0.2, 0.7, 0.7});
    CHECK(p.points() == std::vector<double>{0.2, 0.7, 0.7, 1.5});
    CHECK(p.count(0.0, 2.0) == 4);
    CHECK(p.count(0.2, 0.7) == 2);
    CHECK(p.count(0.7, 1.5) == 1);
    CHECK(p.count(1.5, 2.0) == 0);
    CHECK(p.count(1.0, 0.5) == 0);
    CHECK_THROWS_AS(PointPattern1D({0.0, 1.0}, {0.0}), InputError);
    CHECK_THROWS_AS(PointPattern1D({0.0, 1.0}, {1.2}), InputError);
}

TEST_CASE("2d pattern counts rectangles") {
    const PointPattern2D p({{0.0, 1.0}, {kMinusInf, kPlusInf}}, {{0.7, 2.0}, {0.2, 1.0}, {0.5, 3.0}, {1.0, kPlusInf}});
    CHECK(p.points().front() == Point2{0.2, 1.0});
    CHECK(p.count({{0.0, 1.0}, {1.5, kPlusInf}}) == 3);
    CHECK(p.count({{0.0, 1.0}, {1.5, 10.0}}) == 2);
    CHECK(p.count({{0.0, 0.5}, {kMinusInf, kPlusInf}}) == 2);
    CHECK(p.count({{0.5, 1.0}, {0.0, 2.0}}) == 1);
    CHECK_THROWS_AS(PointPattern2D({{0.0, 1.0}, {0.0, 1.0}}, {{0.5, 2.0}}), InputError);
}

TEST_CASE("pattern csv") {
    std::ostringstream a;
    write_pattern_csv(a, PointPattern1D({0.0, 1.0}, {0.5, 0.25}));
    CHECK(a.str() == "#window,0,1\nt\n0.25\n0.5\n");
    std::ostringstream b;
    write_pattern_csv(b, PointPattern2D({{0.0, 1.0}, {0.0, kPlusInf}}, {{0.5, 2.0}}));
    CHECK(b.str() == "#window,0,1,0,inf\nt,y\n0.5,2\n");
}
