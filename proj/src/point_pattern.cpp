#include "extrema/point_pattern.hpp"

#include <algorithm>
#include <ostream>

#include "extrema/errors.hpp"

namespace extrema {

PointPattern1D::PointPattern1D(Interval window, std::vector<double> points)
    : window_(window), points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    for (double p : points_) {
        if (!window_.contains(p)) throw InputError("point " + format_double(p) + " outside pattern window");
    }
}

std::size_t PointPattern1D::count(double a, double b) const noexcept {
    if (!(a < b)) return 0;
    auto lo = std::upper_bound(points_.begin(), points_.end(), a);
    auto hi = std::upper_bound(points_.begin(), points_.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

PointPattern2D::PointPattern2D(Rect window, std::vector<Point2> points)
    : window_(window), points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(),
              [](const Point2& a, const Point2& b) { return a.t < b.t || (a.t == b.t && a.y < b.y); });
    for (const auto& p : points_) {
        if (!window_.contains(p.t, p.y)) {
            throw InputError("point (" + format_double(p.t) + ", " + format_double(p.y) +
                             ") outside pattern window");
        }
    }
}

std::size_t PointPattern2D::count(const Rect& r) const noexcept {
    auto lo = std::upper_bound(points_.begin(), points_.end(), r.t.lo,
                               [](double v, const Point2& p) { return v < p.t; });
    std::size_t c = 0;
    for (auto it = lo; it != points_.end() && it->t <= r.t.hi; ++it) {
        if (r.y.contains(it->y)) ++c;
    }
    return c;
}

void write_pattern_csv(std::ostream& os, const PointPattern1D& p) {
    os << "#window," << format_double(p.window().lo) << ',' << format_double(p.window().hi) << '\n';
    os << "t\n";
    for (double t : p.points()) os << format_double(t) << '\n';
}

void write_pattern_csv(std::ostream& os, const PointPattern2D& p) {
    const auto& w = p.window();
    os << "#window," << format_double(w.t.lo) << ',' << format_double(w.t.hi) << ','
       << format_double(w.y.lo) << ',' << format_double(w.y.hi) << '\n';
    os << "t,y\n";
    for (const auto& pt : p.points()) os << format_double(pt.t) << ',' << format_double(pt.y) << '\n';
}

}  // namespace extrema
