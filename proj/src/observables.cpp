#include "extrema/observables.hpp"

#include <cmath>
#include <limits>

#include "extrema/errors.hpp"

namespace extrema {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_center(double center) {
    if (!(center >= 0.0 && center <= 1.0)) {
        throw InputError("observable center must lie in [0, 1], got " + std::to_string(center));
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InputError("observable exponent must be positive, got " + std::to_string(alpha));
    }
}

}  // namespace

Observable Observable::neglog(double center) {
    check_center(center);
    return Observable(ObservableFamily::NegLog, center, 0.0, 0.0);
}

Observable Observable::pareto(double alpha, double center) {
    check_center(center);
    check_alpha(alpha);
    return Observable(ObservableFamily::Pareto, center, alpha, 0.0);
}

Observable Observable::bounded(double bound, double alpha, double center) {
    check_center(center);
    check_alpha(alpha);
    if (!std::isfinite(bound)) throw InputError("bounded observable needs a finite bound");
    return Observable(ObservableFamily::Bounded, center, alpha, bound);
}

Observable Observable::from_name(std::string_view name, double center, double alpha, double bound) {
    if (name == "neglog") return neglog(center);
    if (name == "pareto") return pareto(alpha, center);
    if (name == "bounded") return bounded(bound, alpha, center);
    throw ConfigurationError("unknown observable '" + std::string(name) +
                             "' (expected neglog, pareto, bounded)");
}

std::string Observable::name() const {
    switch (family_) {
        case ObservableFamily::NegLog: return "neglog";
        case ObservableFamily::Pareto: return "pareto";
        case ObservableFamily::Bounded: return "bounded";
    }
    return "unknown";
}

double Observable::exceedance_radius(double u) const noexcept {
    switch (family_) {
        case ObservableFamily::NegLog:
            return std::exp(-u);
        case ObservableFamily::Pareto:
            return u <= 0.0 ? kInf : std::pow(u, -1.0 / alpha_);
        case ObservableFamily::Bounded:
            return u >= bound_ ? 0.0 : std::pow(bound_ - u, 1.0 / alpha_);
    }
    return 0.0;
}

Scaling Observable::scaling(double n) const {
    if (!(n >= 1.0)) throw InputError("scaling requires n >= 1");
    switch (family_) {
        case ObservableFamily::NegLog: return {1.0, std::log(n)};
        case ObservableFamily::Pareto: return {std::pow(n, -alpha_), 0.0};
        case ObservableFamily::Bounded: return {std::pow(n, alpha_), bound_};
    }
    return {};
}

GevLimit GevLimit::gumbel(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DegenerateLimitError("theta must lie in (0, inf)");
    return GevLimit(GevFamily::Gumbel, 1.0, theta, 0.0);
}

GevLimit GevLimit::frechet(double shape, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DegenerateLimitError("theta must lie in (0, inf)");
    if (!(shape > 0.0) || !std::isfinite(shape)) throw InputError("Frechet shape must be positive");
    return GevLimit(GevFamily::Frechet, shape, theta, 0.0);
}

GevLimit GevLimit::weibull(double shape, double theta, double endpoint) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DegenerateLimitError("theta must lie in (0, inf)");
    if (!(shape > 0.0) || !std::isfinite(shape)) throw InputError("Weibull shape must be positive");
    return GevLimit(GevFamily::Weibull, shape, theta, endpoint);
}

Support GevLimit::support() const noexcept {
    switch (family_) {
        case GevFamily::Gumbel: return {-kInf, kInf};
        case GevFamily::Frechet: return {0.0, kInf};
        case GevFamily::Weibull: return {-kInf, endpoint_};
    }
    return {-kInf, kInf};
}

std::string GevLimit::name() const {
    switch (family_) {
        case GevFamily::Gumbel: return "gumbel";
        case GevFamily::Frechet: return "frechet";
        case GevFamily::Weibull: return "weibull";
    }
    return "unknown";
}

double GevLimit::Q_extended(double y) const noexcept {
    switch (family_) {
        case GevFamily::Gumbel:
            return theta_ * std::exp(-y);
        case GevFamily::Frechet:
            if (y <= 0.0) return kInf;
            return theta_ * std::pow(y, -shape_);
        case GevFamily::Weibull:
            if (y >= endpoint_) return 0.0;
            return theta_ * std::pow(endpoint_ - y, shape_);
    }
    return kInf;
}

double GevLimit::Q(double y) const {
    if (!support().contains(y)) {
        throw DomainError(name() + " Q(y) undefined outside the open support, y = " + std::to_string(y));
    }
    return Q_extended(y);
}

double GevLimit::cdf(double y) const noexcept {
    const double q = Q_extended(y);
    return std::isinf(q) ? 0.0 : std::exp(-q);
}

double GevLimit::Q_inverse(double q) const {
    if (!(q > 0.0) || std::isinf(q)) throw DomainError("Q_inverse requires q in (0, inf)");
    switch (family_) {
        case GevFamily::Gumbel: return std::log(theta_ / q);
        case GevFamily::Frechet: return std::pow(theta_ / q, 1.0 / shape_);
        case GevFamily::Weibull: return endpoint_ - std::pow(q / theta_, 1.0 / shape_);
    }
    return 0.0;
}

double GevLimit::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile requires p in (0, 1)");
    return Q_inverse(-std::log(p));
}

GevLimit limit_law(const Observable& obs, double rho_at_center) {
    if (!(rho_at_center > 0.0) || !std::isfinite(rho_at_center)) {
        throw DegenerateLimitError("invariant density at the center must lie in (0, inf), got " +
                                   std::to_string(rho_at_center));
    }
    if (obs.center() <= 0.0 || obs.center() >= 1.0) {
        throw DegenerateLimitError("limit law needs an interior center (two-sided balls)");
    }
    const double theta = 2.0 * rho_at_center;
    switch (obs.family()) {
        case ObservableFamily::NegLog: return GevLimit::gumbel(theta);
        case ObservableFamily::Pareto: return GevLimit::frechet(1.0 / obs.alpha(), theta);
        case ObservableFamily::Bounded: return GevLimit::weibull(1.0 / obs.alpha(), theta, 0.0);
    }
    throw DegenerateLimitError("unknown observable family");
}

}  // namespace extrema
