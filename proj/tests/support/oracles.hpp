#pragma once

// Independent reference computations used to freeze expected values.

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "extrema/rng.hpp"
#include "extrema/step_path.hpp"

namespace oracle {

using extrema::Jump;
using extrema::StepPath;

/// H_n = psi(n + 1) + Euler gamma.
inline double harmonic(std::size_t n) {
    return boost::math::digamma(static_cast<double>(n) + 1.0) + std::numbers::egamma;
}

/// CDF of the arcsine law on [0, 1].
inline double arcsine_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

inline double gap(double u, double v) { return u == v ? 0.0 : std::abs(u - v); }

/*!
 * J1 distance by exhaustive search over piecewise-linear time changes: the
 * jumps of p are moved to positions sigma_1 < ... < sigma_m drawn from a
 * 200-point grid of [a, b] plus the jump times of both paths and points
 * k * 1e-7 away from q's jump times; the cost is max(|t_i - sigma_i|,
 * sup |p(h) - q|) with the sup taken over the merged step function.
 * Branches whose time cost already exceeds the best found are pruned.
 */
class BruteForceSkorokhod {
  public:
    BruteForceSkorokhod(const StepPath& p, const StepPath& q, double a, double b) : q_(q), a_(a), b_(b) {
        double cur = p(a);
        p_initial_ = cur;
        for (const auto& j : p.jumps()) {
            if (j.time <= a || j.time >= b || j.value == cur) continue;
            cur = j.value;
            p_times_.push_back(j.time);
            p_values_.push_back(cur);
        }
        p_end_ = p(b);
        for (const auto& j : q.jumps())
            if (j.time > a && j.time < b) q_times_.push_back(j.time);

        for (int k = 0; k <= 200; ++k) grid_.push_back(a + (b - a) * k / 200.0);
        for (double t : p_times_) grid_.push_back(t);
        constexpr double delta = 1e-7;
        for (double s : q_times_)
            for (int k = -3; k <= 3; ++k) grid_.push_back(s + k * delta);
        grid_.erase(std::remove_if(grid_.begin(), grid_.end(), [&](double x) { return x <= a || x >= b; }),
                    grid_.end());
        std::sort(grid_.begin(), grid_.end());
        grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());
    }

    double distance() {
        best_ = value_cost(std::vector<double>(p_times_));  // h = id
        best_ = std::max(best_, 0.0);
        std::vector<double> sigma;
        search(sigma, 0, 0.0);
        return best_;
    }

  private:
    double value_cost(const std::vector<double>& sigma) const {
        // Evaluate both step functions on every piece of the merged partition.
        std::vector<double> knots{a_};
        knots.insert(knots.end(), sigma.begin(), sigma.end());
        knots.insert(knots.end(), q_times_.begin(), q_times_.end());
        std::sort(knots.begin(), knots.end());
        double worst = gap(p_end_, q_(b_));
        for (double s : knots) {
            const auto k = std::upper_bound(sigma.begin(), sigma.end(), s) - sigma.begin();
            const double pv = k == 0 ? p_initial_ : p_values_[static_cast<std::size_t>(k - 1)];
            worst = std::max(worst, gap(pv, q_(s)));
        }
        return worst;
    }

    void search(std::vector<double>& sigma, std::size_t start, double time_cost) {
        const std::size_t i = sigma.size();
        if (time_cost >= best_) return;
        if (i == p_times_.size()) {
            best_ = std::min(best_, std::max(time_cost, value_cost(sigma)));
            return;
        }
        for (std::size_t g = start; g < grid_.size(); ++g) {
            const double c = std::max(time_cost, std::abs(grid_[g] - p_times_[i]));
            if (c >= best_) continue;
            sigma.push_back(grid_[g]);
            search(sigma, g + 1, c);
            sigma.pop_back();
        }
    }

    const StepPath& q_;
    double a_, b_;
    double p_initial_ = 0.0, p_end_ = 0.0;
    std::vector<double> p_times_, p_values_, q_times_, grid_;
    double best_ = 0.0;
};

inline double brute_force_skorokhod(const StepPath& p, const StepPath& q, double a, double b) {
    return BruteForceSkorokhod(p, q, a, b).distance();
}

/// Random step path on (lo, hi] with up to max_jumps jumps at arbitrary
/// heights (not necessarily monotone).
inline StepPath random_step_path(extrema::Rng& rng, int max_jumps, double lo, double hi, bool monotone = false) {
    const int jumps = static_cast<int>(rng() % static_cast<std::uint64_t>(max_jumps + 1));
    std::vector<double> times;
    for (int j = 0; j < jumps; ++j) times.push_back(lo + (hi - lo) * rng.uniform_open());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    double level = 2.0 * rng.uniform() - 1.0;
    const double initial = level;
    std::vector<Jump> js;
    for (double t : times) {
        level = monotone ? level + 0.05 + rng.uniform() : 2.0 * rng.uniform() - 1.0;
        js.push_back({t, level});
    }
    return StepPath(lo, hi, initial, std::move(js));
}

}  // namespace oracle
