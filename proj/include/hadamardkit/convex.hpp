#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hadamardkit/geometry.hpp"

namespace hk {

/// Closed convex set given by one of the supported representations.
struct SegmentSet {
  Geodesic segment;
};
struct BallSet {
  Point center;
  double radius;
};
struct TreeHullSet {
  std::vector<Point> points;  // convex hull = subtree spanned by the points
};

class ConvexSetRepr {
 public:
  static ConvexSetRepr segment(Geodesic g);
  static ConvexSetRepr ball(Point center, double radius);
  static ConvexSetRepr tree_hull(std::vector<Point> points);

  bool is_segment() const { return std::holds_alternative<SegmentSet>(rep_); }
  bool is_ball() const { return std::holds_alternative<BallSet>(rep_); }
  bool is_tree_hull() const { return std::holds_alternative<TreeHullSet>(rep_); }

  const SegmentSet& as_segment() const { return std::get<SegmentSet>(rep_); }
  const BallSet& as_ball() const { return std::get<BallSet>(rep_); }
  const TreeHullSet& as_tree_hull() const { return std::get<TreeHullSet>(rep_); }

 private:
  std::variant<SegmentSet, BallSet, TreeHullSet> rep_;
  explicit ConvexSetRepr(std::variant<SegmentSet, BallSet, TreeHullSet> r)
      : rep_(std::move(r)) {}
};

struct ProjectionResult {
  Point foot;
  std::optional<double> parameter;  // segment variant only
  double distance = 0.0;            // d(query, foot)
};

/// Nearest point of the segment. Trees use the exact gate-point formula;
/// elsewhere t -> d(gamma(t), y) is convex and a ternary search locates the
/// minimizer to within `tol` in parameter.
ProjectionResult project_to_geodesic(const Space& space, const Geodesic& gamma,
                                     const Point& y, double tol = 1e-10);

ProjectionResult project_to_convex(const Space& space, const ConvexSetRepr& set,
                                   const Point& y);

/// d(x,y)^2 - d(y,Px)^2 - d(x,Px)^2 for y in the set; nonnegative up to
/// numerical error in every CAT(0) space.
double projection_inequality_residual(const Space& space,
                                      const ConvexSetRepr& set, const Point& x,
                                      const Point& y);

enum class TriState { yes, no, inconclusive };

struct NormalConeResult {
  TriState verdict = TriState::inconclusive;
  double worst_angle = 0.0;          // smallest sampled angle estimate
  double worst_spread = 0.0;         // estimator spread at the worst sample
  std::optional<Point> witness;      // sample point realizing the worst angle
  int samples_used = 0;
};

/// Sampled membership test for the normal cone of C at p: estimates the
/// angle at p between [p,x] and [p,y] for a finite sample of y in C.
NormalConeResult normal_cone_contains(const Space& space, const Point& p,
                                      const ConvexSetRepr& set, const Point& x,
                                      double angle_tol, int samples = 64);

using PointMap = std::function<Point(const Point&)>;

struct MonotonicityResult {
  bool monotone = true;
  double alpha1 = 0.0;  // violating grid pair when not monotone
  double alpha2 = 0.0;
};

/// Checks d(T x0, T x_alpha) for monotonicity on a uniform alpha grid.
MonotonicityResult geodesic_monotonicity_check(const Space& space,
                                               const PointMap& T,
                                               const Point& x0, const Point& x1,
                                               int grid_size);

}  // namespace hk
