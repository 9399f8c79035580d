#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace extrema {

/// Center used when none is configured; irrational, so not periodic for any
/// of the supported maps.
inline constexpr double kDefaultCenter = 0.70710678118654752440;  // 1/sqrt(2)

enum class ObservableFamily { NegLog, Pareto, Bounded };

/// Normalization Y = a (M - b).
struct Scaling {
    double a = 1.0;
    double b = 0.0;
};

/*!
 * Observable phi(x) = psi(|x - center|) with psi maximal at 0.
 *
 * NegLog:          -log d
 * Pareto(alpha):   d^-alpha
 * Bounded(C, a):   C - d^alpha
 */
class Observable {
  public:
    static Observable neglog(double center = kDefaultCenter);
    static Observable pareto(double alpha, double center = kDefaultCenter);
    static Observable bounded(double bound, double alpha, double center = kDefaultCenter);
    /// Parse "neglog", "pareto" or "bounded".
    static Observable from_name(std::string_view name, double center, double alpha, double bound);

    ObservableFamily family() const noexcept { return family_; }
    double center() const noexcept { return center_; }
    double alpha() const noexcept { return alpha_; }
    double bound() const noexcept { return bound_; }
    std::string name() const;

    /// phi(x); +infinity at x == center for NegLog and Pareto.
    double evaluate(double x) const noexcept {
        const double d = std::abs(x - center_);
        switch (family_) {
            case ObservableFamily::NegLog: return -std::log(d);
            case ObservableFamily::Pareto: return std::pow(d, -alpha_);
            case ObservableFamily::Bounded: return bound_ - std::pow(d, alpha_);
        }
        return 0.0;
    }

    /// Radius r with {phi > u} = {d < r}; psi is strictly decreasing.
    double exceedance_radius(double u) const noexcept;

    /// (a_n, b_n): NegLog (1, log n); Pareto (n^-alpha, 0); Bounded (n^alpha, C).
    Scaling scaling(double n) const;

    friend bool operator==(const Observable&, const Observable&) = default;

  private:
    Observable(ObservableFamily family, double center, double alpha, double bound)
        : family_(family), center_(center), alpha_(alpha), bound_(bound) {}

    ObservableFamily family_;
    double center_;
    double alpha_;
    double bound_;
};

enum class GevFamily { Gumbel, Frechet, Weibull };

/// Support (lo, hi) of a limit law; either end may be infinite.
struct Support {
    double lo;
    double hi;
    bool contains(double y) const noexcept { return y > lo && y < hi; }
};

/*!
 * Limit law G with Q(y) = -log G(y).
 *
 * Gumbel:           Q(y) = theta e^-y             on (-inf, inf)
 * Frechet(xi):      Q(y) = theta y^-xi            on (0, inf)
 * Weibull(xi, C):   Q(y) = theta (C - y)^xi       on (-inf, C)
 *
 * theta is the ball-mass factor 2 rho(center).
 */
class GevLimit {
  public:
    static GevLimit gumbel(double theta);
    static GevLimit frechet(double shape, double theta);
    static GevLimit weibull(double shape, double theta, double endpoint = 0.0);

    GevFamily family() const noexcept { return family_; }
    double shape() const noexcept { return shape_; }
    double theta() const noexcept { return theta_; }
    double endpoint() const noexcept { return endpoint_; }
    Support support() const noexcept;
    std::string name() const;

    /// G(y); total on the real line (0 below the support, 1 above).
    double cdf(double y) const noexcept;
    /// G^-1(p) for p in (0, 1); throws DomainError otherwise.
    double quantile(double p) const;
    /// Q(y) = -log G(y) for y interior to the support; throws DomainError otherwise.
    double Q(double y) const;
    /// Q extended to the closed support: +inf at the lower end, 0 at/above the upper.
    double Q_extended(double y) const noexcept;
    /// Solve Q(y) = q for q in (0, inf); the level whose tail mass is q.
    double Q_inverse(double q) const;

    friend bool operator==(const GevLimit&, const GevLimit&) = default;

  private:
    GevLimit(GevFamily family, double shape, double theta, double endpoint)
        : family_(family), shape_(shape), theta_(theta), endpoint_(endpoint) {}

    GevFamily family_;
    double shape_;
    double theta_;
    double endpoint_;
};

/*!
 * Limit law of a_n (M_n - b_n) for an observable centered where the
 * invariant density is rho_at_center.
 *
 * theta = 2 rho (two-sided balls). Pareto(alpha) gives Frechet with shape
 * 1/alpha and Bounded(C, alpha) gives Weibull with shape 1/alpha, both from
 * n mu{d < r_n} ~ 2 rho r_n under the scalings above.
 * Throws DegenerateLimitError unless rho_at_center lies in (0, inf).
 */
GevLimit limit_law(const Observable& obs, double rho_at_center);

}  // namespace extrema
