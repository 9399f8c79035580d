#pragma once

#include <optional>
#include <span>
#include <string>

#include "extrema/observables.hpp"
#include "extrema/point_pattern.hpp"
#include "extrema/rng.hpp"
#include "extrema/step_path.hpp"

namespace extrema {

enum class IntensityKind { RecordTime, Planar, RecordValue, UniformRate };

/*!
 * Mean measure of a Poisson random measure.
 *
 * RecordTime:   density 1/t on (0, inf)
 * Planar:       Leb x lambda_G, lambda_G((c, d]) = log G(d) - log G(c)
 * RecordValue:  lambda_V((a, b]) = -log(-log G(b)) + log(-log G(a))
 * UniformRate:  c Leb
 */
class IntensityMeasure {
  public:
    static IntensityMeasure record_time() { return IntensityMeasure(IntensityKind::RecordTime, std::nullopt, 1.0); }
    static IntensityMeasure planar(const GevLimit& g) { return IntensityMeasure(IntensityKind::Planar, g, 1.0); }
    static IntensityMeasure record_value(const GevLimit& g) {
        return IntensityMeasure(IntensityKind::RecordValue, g, 1.0);
    }
    static IntensityMeasure uniform_rate(double rate);

    IntensityKind kind() const noexcept { return kind_; }
    const GevLimit& limit() const;
    double rate() const noexcept { return rate_; }
    bool is_planar() const noexcept { return kind_ == IntensityKind::Planar; }
    std::string name() const;

  private:
    IntensityMeasure(IntensityKind kind, std::optional<GevLimit> g, double rate)
        : kind_(kind), g_(g), rate_(rate) {}

    IntensityKind kind_;
    std::optional<GevLimit> g_;
    double rate_;
};

/// Mass of a 1D window. Throws DomainError when the window touches a
/// singular boundary (t = 0 for RecordTime, support edges for RecordValue)
/// or when called with a planar intensity.
double measure_of(const IntensityMeasure& intensity, const Interval& window);

/// Mass of (a, b] x (c, d] under Leb x lambda_G. d may be +inf; c must lie
/// above the lower end of G's support.
double measure_of(const IntensityMeasure& intensity, const Rect& window);

/// Poisson count with the window's mass, then iid points from the
/// normalized intensity by inverse CDF.
PointPattern1D sample_prm(const IntensityMeasure& intensity, const Interval& window, Rng& rng);

/// Planar PRM: t uniform on (a, b], y by inverting lambda_G on (c, d].
PointPattern2D sample_prm(const IntensityMeasure& intensity, const Rect& window, Rng& rng);

/// Keep each point independently with probability p in (0, 1).
PointPattern1D thin(const PointPattern1D& pattern, double p, Rng& rng);
PointPattern2D thin(const PointPattern2D& pattern, double p, Rng& rng);

/// xi_n = { (i/n, a (X_i - b)) : 1 <= i <= n } on (0, 1] x R.
PointPattern2D build_xi_n(std::span<const double> xs, Scaling scaling, std::size_t n);

/// H1: t -> sup{ y_i : t_i <= t } on the window (t_lo, t_hi]; -inf before
/// the first point.
StepPath functional_H1(const PointPattern2D& pattern, const Interval& window);

/// H2: level -> inf{ t_i : y_i > level }; +inf if no point exceeds it.
double functional_H2(const PointPattern2D& pattern, double level);

/// H3: number of jump epochs of the path in (a, b].
std::size_t functional_H3(const StepPath& path, double a, double b);

}  // namespace extrema
