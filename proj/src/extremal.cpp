#include "extrema/extremal.hpp"

#include <algorithm>
#include <cmath>

#include "extrema/errors.hpp"
#include "extrema/pointproc.hpp"

namespace extrema {

double fdd_cdf(const GevLimit& g, std::span<const double> times, std::span<const double> values) {
    if (times.empty() || times.size() != values.size()) {
        throw InputError("fdd_cdf needs matching, nonempty times and values");
    }
    double prev = 0.0;
    for (double t : times) {
        if (!(t > prev)) throw InputError("fdd_cdf times must be positive and strictly increasing");
        prev = t;
    }
    // Suffix minima of the levels.
    const std::size_t k = times.size();
    double log_p = 0.0;
    double suffix_min = kPlusInf;
    std::vector<double> mins(k);
    for (std::size_t i = k; i-- > 0;) {
        suffix_min = std::min(suffix_min, values[i]);
        mins[i] = suffix_min;
    }
    prev = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double q = g.Q_extended(mins[j]);
        if (std::isinf(q)) return 0.0;
        log_p -= (times[j] - prev) * q;
        prev = times[j];
    }
    return std::exp(log_p);
}

double conditional_no_jump_prob(const GevLimit& g, double y, double t) {
    if (!(t >= 0.0)) throw InputError("holding horizon must be nonnegative");
    if (!g.support().contains(y)) throw DomainError("state outside the open support of G");
    if (t == 0.0) return 1.0;
    return std::exp(-t * g.Q(y));
}

StepPath sample_extremal_path(const GevLimit& g, double t_start, double t_end, Rng& rng) {
    if (!(t_start > 0.0) || !(t_end > t_start)) {
        throw InputError("extremal path needs 0 < t_start < t_end");
    }
    double y = g.Q_inverse(rng.exponential(1.0) / t_start);
    const double initial = y;
    std::vector<Jump> jumps;
    double t = t_start;
    for (;;) {
        const double q = g.Q_extended(y);
        if (!(q > 0.0)) break;
        t += rng.exponential(q);
        if (t > t_end) break;
        double next = g.Q_inverse(q * rng.uniform_open());
        if (!(next > y)) next = std::nextafter(y, kPlusInf);
        y = next;
        jumps.push_back({t, y});
    }
    return StepPath(t_start, t_end, initial, std::move(jumps));
}

StepPath sample_extremal_path_via_prm(const GevLimit& g, double t_start, double t_end, Rng& rng,
                                      double floor_mass) {
    if (!(t_start > 0.0) || !(t_end > t_start)) {
        throw InputError("extremal path needs 0 < t_start < t_end");
    }
    if (!(floor_mass > 0.0)) throw InputError("floor_mass must be positive");
    const double floor_level = g.Q_inverse(floor_mass / t_start);
    const auto intensity = IntensityMeasure::planar(g);
    const auto pattern = sample_prm(intensity, Rect{{0.0, t_end}, {floor_level, kPlusInf}}, rng);
    return functional_H1(pattern, Interval{t_start, t_end});
}

}  // namespace extrema
