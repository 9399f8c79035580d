#include "extrema/records.hpp"

#include <algorithm>

#include "extrema/errors.hpp"

namespace extrema {

std::size_t RecordSummary::count_up_to(std::size_t n) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(taus.begin(), taus.end(), n) - taus.begin());
}

RecordSummary record_times(std::span<const double> xs) {
    if (xs.empty()) throw InputError("record_times of an empty series");
    RecordTracker tracker;
    for (double x : xs) tracker.push(x);
    return tracker.summary();
}

PointPattern1D record_time_pattern(const RecordSummary& summary, std::size_t n, double t_hi) {
    if (n == 0) throw InputError("record_time_pattern requires n >= 1");
    if (!(t_hi > 0.0)) throw InputError("record_time_pattern requires t_hi > 0");
    std::vector<double> pts;
    const double nd = static_cast<double>(n);
    for (std::size_t tau : summary.taus) {
        const double t = static_cast<double>(tau) / nd;
        if (t > t_hi) break;
        pts.push_back(t);
    }
    return PointPattern1D(Interval{0.0, t_hi}, std::move(pts));
}

PointPattern1D record_value_pattern(const RecordSummary& summary, Scaling scaling, std::size_t n,
                                    std::size_t max_epoch) {
    const std::size_t last = max_epoch == 0 ? n : max_epoch;
    std::vector<double> pts;
    for (std::size_t k = 0; k < summary.taus.size() && summary.taus[k] <= last; ++k) {
        pts.push_back(scaling.a * (summary.values[k] - scaling.b));
    }
    // Record values increase, but a negative scale factor would reverse them.
    std::sort(pts.begin(), pts.end());
    return PointPattern1D(Interval{kMinusInf, kPlusInf}, std::move(pts));
}

std::vector<WCheckpoint> w_checkpoints(const RecordSummary& summary) {
    std::vector<WCheckpoint> out;
    const std::size_t len = summary.length;
    for (std::size_t decade = 1; decade <= len; decade *= 10) {
        for (std::size_t m : {1u, 2u, 5u}) {
            const std::size_t n = decade * m;
            if (n > len) break;
            out.push_back({n, summary.count_up_to(n)});
        }
        if (decade > len / 10) break;
    }
    if (len > 0 && (out.empty() || out.back().n != len)) out.push_back({len, summary.count_up_to(len)});
    return out;
}

double harmonic_number(std::size_t n) {
    // Summed from the small end for accuracy.
    double s = 0.0;
    for (std::size_t j = n; j >= 1; --j) s += 1.0 / static_cast<double>(j);
    return s;
}

}  // namespace extrema
