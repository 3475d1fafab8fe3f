#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hadamardkit/geometry.hpp"

namespace hk {

/// Deterministic stream of pseudo-random draws. Identical seeds give
/// identical streams; the uniform doubles are derived directly from the
/// engine's output words, so streams are reproducible across platforms.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 0) : engine_(seed ^ 0x9e3779b97f4a7c15ull) {}

  std::uint64_t bits() { return engine_(); }
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int n) {  // 0..n-1
    return static_cast<int>(bits() % static_cast<std::uint64_t>(n));
  }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random point in the space's bounded sampling region: the unit box
/// [-1,1]^n (euclidean), the whole tree, both squares, or the hyperbolic
/// disk of radius 3 about (1,0,0).
Point sample_point(const Space& space, Sampler& sampler);

struct DirectionFan {
  Point base;
  std::vector<Geodesic> geodesics;   // all start at base, positive length
  std::vector<std::string> labels;
  bool truncated = false;            // fewer directions than requested
};

/// Finite set of unit-capped geodesics from x: angular fans in the flat and
/// hyperbolic models, one direction per incident edge in trees (first k when
/// the degree exceeds k), pairwise combinations in products.
DirectionFan direction_fan(const Space& space, const Point& x, int k,
                           std::uint64_t seed = 0);

/// Farthest point reachable from x along the direction of g at arclength s,
/// extending beyond g's endpoint where the space permits. `clamped` reports
/// whether the step was cut short (tree reach, square boundary).
Point step_along(const Space& space, const Point& x, const Geodesic& g,
                 double s, bool* clamped = nullptr);

}  // namespace hk
