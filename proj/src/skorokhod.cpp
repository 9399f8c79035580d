#include "extrema/skorokhod.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>

#include "extrema/errors.hpp"

namespace extrema {

namespace {

// Relative slack for comparisons against candidate eps values, which are
// themselves differences of the same doubles.
constexpr double kSlack = 1e-12;

double gap(double u, double v) {
    if (u == v) return 0.0;
    return std::abs(u - v);  // inf when exactly one side is an infinite marker
}

struct Segments {
    std::vector<double> times;   // jump times in (a, b), size m
    std::vector<double> values;  // m + 1 values: initial, then after each jump
    double at_end = 0.0;         // value at b
};

Segments segments_on(const StepPath& path, double a, double b) {
    if (path.t_lo() > a || path.t_hi() < b) {
        throw InputError("path window (" + format_double(path.t_lo()) + ", " + format_double(path.t_hi()) +
                         "] does not cover [" + format_double(a) + ", " + format_double(b) + "]");
    }
    Segments s;
    double current = path(a);
    s.values.push_back(current);
    for (const auto& j : path.jumps()) {
        if (j.time <= a) continue;
        if (j.time >= b) break;
        if (j.value == current) continue;
        current = j.value;
        s.times.push_back(j.time);
        s.values.push_back(current);
    }
    s.at_end = path(b);
    return s;
}

bool within(double x, double eps) { return x <= eps + kSlack * (1.0 + eps); }

// Is there an admissible time change with both sup terms <= eps? Jumps at
// exactly b cannot move (h(b) = b) and are folded into the endpoint check.
bool feasible(const Segments& p, const Segments& q, double a, double b, double eps) {
    if (!within(gap(p.at_end, q.at_end), eps)) return false;
    const std::size_t P = p.times.size();
    const std::size_t Q = q.times.size();
    const std::size_t cols = Q + 1;
    std::vector<double> cursor((P + 1) * (Q + 1), kPlusInf);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return cursor[i * cols + j]; };
    auto q_next = [&](std::size_t j) { return j < Q ? q.times[j] : b; };  // s_{j+1}
    auto value_ok = [&](std::size_t i, std::size_t j) { return within(gap(p.values[i], q.values[j]), eps); };

    if (!value_ok(0, 0)) return false;
    at(0, 0) = a;
    for (std::size_t diag = 0; diag <= P + Q; ++diag) {
        for (std::size_t i = (diag > Q ? diag - Q : 0); i <= std::min(diag, P); ++i) {
            const std::size_t j = diag - i;
            const double c = at(i, j);
            if (std::isinf(c)) continue;
            // q jumps next.
            if (j < Q && value_ok(i, j + 1)) {
                at(i, j + 1) = std::min(at(i, j + 1), q.times[j]);
            }
            if (i < P) {
                const double t = p.times[i];
                // p jumps next, strictly inside the current q segment (closure).
                const double sigma = std::max(c, t - eps);
                if (sigma <= t + eps + kSlack * (1.0 + eps) && sigma <= q_next(j) && value_ok(i + 1, j)) {
                    at(i + 1, j) = std::min(at(i + 1, j), sigma);
                }
                // Both jump together: p's jump is carried onto q's.
                if (j < Q && within(gap(t, q.times[j]), eps) && value_ok(i + 1, j + 1)) {
                    at(i + 1, j + 1) = std::min(at(i + 1, j + 1), q.times[j]);
                }
            }
        }
    }
    return !std::isinf(at(P, Q));
}

}  // namespace

double skorokhod_distance(const StepPath& p, const StepPath& q, double a, double b) {
    if (!(a < b)) throw InputError("skorokhod_distance requires a < b");
    const Segments sp = segments_on(p, a, b);
    const Segments sq = segments_on(q, a, b);

    std::vector<double> candidates{0.0, gap(sp.at_end, sq.at_end)};
    for (double u : sp.values)
        for (double v : sq.values) candidates.push_back(gap(u, v));
    for (double t : sp.times)
        for (double s : sq.times) candidates.push_back(gap(t, s));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    if (!feasible(sp, sq, a, b, candidates[hi])) return kPlusInf;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(sp, sq, a, b, candidates[mid])) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

double uniform_distance(const StepPath& p, const StepPath& q, double a, double b) {
    if (!(a < b)) throw InputError("uniform_distance requires a < b");
    std::vector<double> knots{a};
    for (const auto* path : {&p, &q})
        for (const auto& j : path->jumps())
            if (j.time > a && j.time <= b) knots.push_back(j.time);
    double worst = 0.0;
    for (double t : knots) worst = std::max(worst, gap(p(t), q(t)));
    return worst;
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw InputError("quadrature needs at least one node");
    const auto positive = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> xs;
    for (double x : positive) {
        xs.push_back(x);
        if (x != 0.0) xs.push_back(-x);
    }
    std::sort(xs.begin(), xs.end());
    QuadratureRule rule;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (double x : xs) {
        const double dp = boost::math::legendre_p_prime(n, x);
        rule.nodes.push_back(mid + half * x);
        rule.weights.push_back(half * 2.0 / ((1.0 - x * x) * dp * dp));
    }
    return rule;
}

double skorokhod_distance_0inf(const StepPath& p, const StepPath& q) {
    static const QuadratureRule s_rule = gauss_legendre(kSkorokhodNodesS, 0.0, 1.0);
    static const QuadratureRule t_rule = gauss_legendre(kSkorokhodNodesT, 1.0, kSkorokhodHorizon);
    const double s_min = s_rule.nodes.front();
    for (const auto* path : {&p, &q}) {
        if (path->t_lo() > s_min || path->t_hi() < kSkorokhodHorizon) {
            throw InputError("d_0inf needs paths covering [" + format_double(s_min) + ", " +
                             format_double(kSkorokhodHorizon) + "]");
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < s_rule.nodes.size(); ++i) {
        const double s = s_rule.nodes[i];
        double inner = 0.0;
        for (std::size_t k = 0; k < t_rule.nodes.size(); ++k) {
            const double t = t_rule.nodes[k];
            const double d = skorokhod_distance(p, q, s, t);
            inner += t_rule.weights[k] * std::exp(-t) * std::min(1.0, d);
        }
        total += s_rule.weights[i] * inner;
    }
    return total;
}

}  // namespace extrema
