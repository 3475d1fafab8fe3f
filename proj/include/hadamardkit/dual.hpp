#pragma once

#include <vector>

#include "hadamardkit/geometry.hpp"

namespace hk {

/// The function y -> d(x, P_gamma y) attached to a geodesic gamma from x.
struct DualFunction {
  Point base;
  Geodesic gamma;  // gamma(0) = base within 1e-9
};

DualFunction make_dual(const Space& space, const Geodesic& gamma);

double phi_eval(const Space& space, const DualFunction& phi, const Point& y);

/// Sample lower bound of the normalized sup distance between two duals with
/// the same base. Monotone nondecreasing in the sample; never exceeds 1 (up
/// to rounding) because both values lie in [0, d(x,y)].
double dual_distance_estimate(const Space& space, const DualFunction& a,
                              const DualFunction& b,
                              const std::vector<Point>& sample);

/// Default sample for the estimate: space-random points plus both endpoints.
std::vector<Point> dual_distance_sample(const Space& space,
                                        const DualFunction& a,
                                        const DualFunction& b,
                                        int random_points = 256,
                                        std::uint64_t seed = 0);

/// Closed form of the normalized difference sup in euclidean spaces in the
/// small-radius regime (no far-endpoint clamping): sin of the angle between
/// the two directions, saturating at 1 for angles >= pi/2. Cross-validates
/// the sampled estimate on direction-dense samples near the base.
double dual_distance_exact_euclidean(const Space& space, const DualFunction& a,
                                     const DualFunction& b);

/// Strict per-point membership test of eta's dual in the weak-* basis
/// neighbourhood of gamma_ref's dual.
bool weak_star_nbhd_contains(const Space& space, const DualFunction& gamma_ref,
                             double epsilon,
                             const std::vector<Point>& test_points,
                             const DualFunction& eta);

}  // namespace hk
