#include "extrema/pointproc.hpp"

#include <algorithm>
#include <cmath>

#include "extrema/errors.hpp"

namespace extrema {

IntensityMeasure IntensityMeasure::uniform_rate(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("uniform rate must be positive and finite");
    return IntensityMeasure(IntensityKind::UniformRate, std::nullopt, rate);
}

const GevLimit& IntensityMeasure::limit() const {
    if (!g_) throw InputError(name() + " intensity has no limit law");
    return *g_;
}

std::string IntensityMeasure::name() const {
    switch (kind_) {
        case IntensityKind::RecordTime: return "record-time";
        case IntensityKind::Planar: return "planar";
        case IntensityKind::RecordValue: return "record-value";
        case IntensityKind::UniformRate: return "uniform-rate";
    }
    return "unknown";
}

namespace {

void check_interval(const Interval& w) {
    if (!(w.lo < w.hi)) throw DomainError("window must satisfy lo < hi");
}

// Cumulative record-value measure: Lambda(y) = -log Q(y).
double record_value_cumulative(const GevLimit& g, double y) { return -std::log(g.Q_extended(y)); }

}  // namespace

double measure_of(const IntensityMeasure& intensity, const Interval& w) {
    check_interval(w);
    switch (intensity.kind()) {
        case IntensityKind::RecordTime:
            if (!(w.lo > 0.0)) throw DomainError("record-time intensity 1/t diverges at t = 0; need lo > 0");
            if (!std::isfinite(w.hi)) throw DomainError("record-time window must be bounded");
            return std::log(w.hi / w.lo);
        case IntensityKind::UniformRate:
            if (!std::isfinite(w.lo) || !std::isfinite(w.hi)) throw DomainError("uniform-rate window must be bounded");
            return intensity.rate() * w.length();
        case IntensityKind::RecordValue: {
            const auto& g = intensity.limit();
            const auto s = g.support();
            if (!(w.lo > s.lo) || !(w.hi < s.hi)) {
                throw DomainError("record-value window must lie inside the open support of G");
            }
            return record_value_cumulative(g, w.hi) - record_value_cumulative(g, w.lo);
        }
        case IntensityKind::Planar:
            throw DomainError("planar intensity needs a rectangle window");
    }
    throw DomainError("unknown intensity");
}

double measure_of(const IntensityMeasure& intensity, const Rect& w) {
    if (!intensity.is_planar()) throw DomainError(intensity.name() + " intensity needs an interval window");
    check_interval(w.t);
    check_interval(w.y);
    if (!(w.t.lo >= 0.0) || !std::isfinite(w.t.hi)) throw DomainError("planar time window must lie in [0, inf) and be bounded");
    const auto& g = intensity.limit();
    if (!(w.y.lo > g.support().lo)) {
        throw DomainError("planar value window must start above the lower end of G's support");
    }
    return w.t.length() * (g.Q_extended(w.y.lo) - g.Q_extended(w.y.hi));
}

PointPattern1D sample_prm(const IntensityMeasure& intensity, const Interval& w, Rng& rng) {
    const double mass = measure_of(intensity, w);
    if (!std::isfinite(mass)) throw DomainError("window has infinite mass");
    const long count = rng.poisson(mass);
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(count));
    switch (intensity.kind()) {
        case IntensityKind::RecordTime: {
            const double ratio = w.hi / w.lo;
            for (long i = 0; i < count; ++i) pts.push_back(w.lo * std::pow(ratio, rng.uniform_open()));
            break;
        }
        case IntensityKind::UniformRate:
            for (long i = 0; i < count; ++i) pts.push_back(w.lo + w.length() * rng.uniform_open());
            break;
        case IntensityKind::RecordValue: {
            const auto& g = intensity.limit();
            const double lo = record_value_cumulative(g, w.lo);
            const double span = record_value_cumulative(g, w.hi) - lo;
            for (long i = 0; i < count; ++i) {
                pts.push_back(g.Q_inverse(std::exp(-(lo + span * rng.uniform_open()))));
            }
            break;
        }
        case IntensityKind::Planar:
            throw DomainError("planar intensity needs a rectangle window");
    }
    // Inverse-CDF rounding can land a hair outside; clamp into the window.
    const double floor = std::nextafter(w.lo, w.hi);
    for (auto& p : pts) p = std::clamp(p, floor, w.hi);
    return PointPattern1D(w, std::move(pts));
}

PointPattern2D sample_prm(const IntensityMeasure& intensity, const Rect& w, Rng& rng) {
    const double mass = measure_of(intensity, w);
    if (!std::isfinite(mass)) throw DomainError("window has infinite mass");
    const auto& g = intensity.limit();
    const double q_top = g.Q_extended(w.y.hi);
    const double q_bottom = g.Q_extended(w.y.lo);
    const long count = rng.poisson(mass);
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    const double y_floor = std::nextafter(w.y.lo, w.y.hi);
    const double t_floor = std::nextafter(w.t.lo, w.t.hi);
    for (long i = 0; i < count; ++i) {
        const double t = std::max(t_floor, w.t.lo + w.t.length() * rng.uniform_open());
        const double q = q_top + (q_bottom - q_top) * rng.uniform_open();
        const double y = std::clamp(g.Q_inverse(q), y_floor, w.y.hi);
        pts.push_back({std::min(t, w.t.hi), y});
    }
    return PointPattern2D(w, std::move(pts));
}

namespace {

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("thinning probability must lie in (0, 1)");
}

}  // namespace

PointPattern1D thin(const PointPattern1D& pattern, double p, Rng& rng) {
    check_probability(p);
    std::vector<double> kept;
    for (double x : pattern.points()) {
        if (rng.bernoulli(p)) kept.push_back(x);
    }
    return PointPattern1D(pattern.window(), std::move(kept));
}

PointPattern2D thin(const PointPattern2D& pattern, double p, Rng& rng) {
    check_probability(p);
    std::vector<Point2> kept;
    for (const auto& x : pattern.points()) {
        if (rng.bernoulli(p)) kept.push_back(x);
    }
    return PointPattern2D(pattern.window(), std::move(kept));
}

PointPattern2D build_xi_n(std::span<const double> xs, Scaling scaling, std::size_t n) {
    if (n == 0) throw InputError("build_xi_n requires n >= 1");
    if (xs.size() < n) throw InputError("series shorter than n");
    std::vector<Point2> pts;
    pts.reserve(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        pts.push_back({static_cast<double>(i) / nd, scaling.a * (xs[i - 1] - scaling.b)});
    }
    // Infinite markers (X = +inf at the center) still need to sit in the window.
    return PointPattern2D(Rect{{0.0, 1.0}, {kMinusInf, kPlusInf}}, std::move(pts));
}

StepPath functional_H1(const PointPattern2D& pattern, const Interval& window) {
    std::vector<Jump> jumps;
    double current = kMinusInf;
    double initial = kMinusInf;
    for (const auto& p : pattern.points()) {
        if (p.t > window.hi) break;
        if (p.t <= window.lo) {
            if (p.y > initial) initial = p.y;
            current = initial;
            continue;
        }
        if (p.y > current) {
            current = p.y;
            if (!jumps.empty() && jumps.back().time == p.t) {
                jumps.back().value = current;
            } else {
                jumps.push_back({p.t, current});
            }
        }
    }
    return StepPath(window.lo, window.hi, initial, std::move(jumps));
}

double functional_H2(const PointPattern2D& pattern, double level) {
    for (const auto& p : pattern.points()) {
        if (p.y > level) return p.t;
    }
    return kPlusInf;
}

std::size_t functional_H3(const StepPath& path, double a, double b) { return path.jumps_in(a, b); }

}  // namespace extrema
