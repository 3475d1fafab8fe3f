#pragma once

#include <vector>

#include "hadamardkit/space.hpp"

namespace hk {

/// Geodesic segment stored by its endpoints; the evaluator is derived from
/// the owning space, so the representation is lossless. Zero length encodes
/// the trivial segment that stays at `start`.
struct Geodesic {
  Space space;
  Point start;
  Point end;
  double length = 0.0;

  Point at(double t) const;
};

double distance(const Space& space, const Point& p, const Point& q);

Geodesic geodesic(const Space& space, const Point& p, const Point& q);

/// The point x_t with d(x_t, x) = t * d(x, y) on the segment [x, y].
Point combine(const Space& space, const Point& x, const Point& y, double t);

/// Vertex angle at p of the Euclidean triangle with the same side lengths,
/// in [0, pi]. Requires d(p,q) and d(p,r) above 1e-12.
double comparison_angle(const Space& space, const Point& p, const Point& q,
                        const Point& r);

struct AngleEstimate {
  double value = 0.0;               // max of the tail samples
  double spread = 0.0;              // max - min over the tail window
  std::vector<double> scales;       // curve parameters actually sampled
  std::vector<double> samples;      // comparison angle at each scale
};

std::vector<double> default_angle_schedule();  // 2^-1 .. 2^-20

/// Sampled estimate of the upper angle between two segments from the same
/// point: comparison angles at shrinking scales, reported as the max over
/// the last five samples. An estimate, never exact.
AngleEstimate alexandrov_angle(const Space& space, const Geodesic& gamma,
                               const Geodesic& eta,
                               const std::vector<double>& schedule =
                                   default_angle_schedule(),
                               int tail_window = 5);

/// (1-t) d(x,z)^2 + t d(y,z)^2 - t(1-t) d(x,y)^2 - d(x_t,z)^2.
/// Nonnegative in every CAT(0) space, identically zero in euclidean ones.
double cat0_quadratic_residual(const Space& space, const Point& x,
                               const Point& y, const Point& z, double t);

/// <xz, yw> = (d(x,y)^2 + d(z,w)^2 - d(x,w)^2 - d(z,y)^2) / 2.
/// Reduces to the inner product (z-x).(w-y) in euclidean spaces.
double quasilinearization(const Space& space, const Point& x, const Point& z,
                          const Point& y, const Point& w);

}  // namespace hk
