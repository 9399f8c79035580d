#pragma once

#include <vector>

#include "extrema/step_path.hpp"

namespace extrema {

/*!
 * J1 distance on [a, b]:
 *   inf_h max( sup |p(h(s)) - q(s)|, sup |h(s) - s| )
 * over increasing homeomorphisms h of [a, b] fixing both ends.
 *
 * For step paths the infimum only depends on how the jumps of p are
 * interleaved with (or matched onto) the jumps of q. A feasibility check for
 * a given eps walks the grid of (p segment, q segment) states in time order,
 * keeping the earliest admissible position of the last placed p jump; the
 * distance is the smallest feasible eps among the finitely many critical
 * values (pairwise value gaps and pairwise jump-time gaps).
 *
 * Throws InputError unless both paths are defined on [a, b].
 */
double skorokhod_distance(const StepPath& p, const StepPath& q, double a, double b);

/// sup_{a <= t <= b} |p(t) - q(t)|; the h = id bound on the J1 distance.
double uniform_distance(const StepPath& p, const StepPath& q, double a, double b);

/// Truncation horizon and node counts of the d_{0,inf} quadrature.
inline constexpr double kSkorokhodHorizon = 8.0;
inline constexpr int kSkorokhodNodesS = 32;
inline constexpr int kSkorokhodNodesT = 64;

/*!
 * d_{0,inf}(p, q) = int_0^1 int_1^inf e^-t (1 ^ d_{s,t}(p|[s,t], q|[s,t])) dt ds,
 * with t truncated at kSkorokhodHorizon (error <= e^-8) and Gauss-Legendre
 * rules of 32 nodes in s and 64 nodes in t.
 *
 * Throws InputError if either path does not cover [first s node, horizon].
 */
double skorokhod_distance_0inf(const StepPath& p, const StepPath& q);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

}  // namespace extrema
