#pragma once

#include <span>

#include "extrema/observables.hpp"
#include "extrema/rng.hpp"
#include "extrema/step_path.hpp"

namespace extrema {

/*!
 * Finite-dimensional CDF of the extremal-G process:
 *   P(Y(t_1) <= u_1, ..., Y(t_k) <= u_k)
 *     = prod_j G^{t_j - t_{j-1}}( min_{i >= j} u_i ),  t_0 = 0.
 * Throws InputError unless 0 < t_1 < ... < t_k and sizes match.
 */
double fdd_cdf(const GevLimit& g, std::span<const double> times, std::span<const double> values);

/// P(no jump during the next t time units | current state y) = G(y)^t.
double conditional_no_jump_prob(const GevLimit& g, double y, double t);

/// Start time used when none is given; Y(0+) sits at the lower support end.
inline constexpr double kDefaultPathStart = 0.05;

/*!
 * Exact jump-chain sample of the extremal-G process on (t_start, t_end].
 *
 * Y(t_start) ~ G^{t_start}; in state y the holding time is Exponential with
 * rate Q(y) and the next state x > y has P(next <= x) = 1 - Q(x)/Q(y), i.e.
 * Q(next) = Q(y) U. A state with Q(y) = 0 is absorbing.
 */
StepPath sample_extremal_path(const GevLimit& g, double t_start, double t_end, Rng& rng);

/*!
 * Independent route to the same law: sample the planar PRM with intensity
 * Leb x lambda_G on (0, t_end] x (c, inf) and take its running supremum
 * (H1) on (t_start, t_end]. The floor c is set so that the expected number
 * of points above c before t_start is `floor_mass`; the path starts at
 * -infinity with probability exp(-floor_mass).
 */
StepPath sample_extremal_path_via_prm(const GevLimit& g, double t_start, double t_end, Rng& rng,
                                      double floor_mass = 40.0);

}  // namespace extrema
