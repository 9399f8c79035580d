#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "extrema/step_path.hpp"

namespace extrema {

/// Half-open interval (lo, hi].
struct Interval {
    double lo;
    double hi;
    double length() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return x > lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Rectangle (t.lo, t.hi] x (y.lo, y.hi].
struct Rect {
    Interval t;
    Interval y;
    bool contains(double tt, double yy) const noexcept { return t.contains(tt) && y.contains(yy); }
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Point2 {
    double t;
    double y;
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Finite point set on an interval window, kept sorted.
class PointPattern1D {
  public:
    PointPattern1D() = default;
    /// Sorts the points; throws InputError if any lies outside the window.
    PointPattern1D(Interval window, std::vector<double> points);

    const Interval& window() const noexcept { return window_; }
    const std::vector<double>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    /// Number of points in (a, b].
    std::size_t count(double a, double b) const noexcept;
    std::size_t count(const Interval& iv) const noexcept { return count(iv.lo, iv.hi); }

    friend bool operator==(const PointPattern1D&, const PointPattern1D&) = default;

  private:
    Interval window_{0.0, 1.0};
    std::vector<double> points_;
};

/// Finite point set on a rectangle window, kept sorted by (t, y).
class PointPattern2D {
  public:
    PointPattern2D() = default;
    PointPattern2D(Rect window, std::vector<Point2> points);

    const Rect& window() const noexcept { return window_; }
    const std::vector<Point2>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    std::size_t count(const Rect& r) const noexcept;

    friend bool operator==(const PointPattern2D&, const PointPattern2D&) = default;

  private:
    Rect window_{{0.0, 1.0}, {kMinusInf, kPlusInf}};
    std::vector<Point2> points_;
};

/// CSV: "#window,lo,hi" then a "t" column, or "#window,t_lo,t_hi,y_lo,y_hi" then "t,y".
void write_pattern_csv(std::ostream& os, const PointPattern1D& p);
void write_pattern_csv(std::ostream& os, const PointPattern2D& p);

}  // namespace extrema
