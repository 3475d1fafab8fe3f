#include "hadamardkit/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hadamardkit/sampler.hpp"

namespace hk {

namespace {

constexpr double kMembershipTol = 1e-8;

// Gate point of y on the path [a,b] in a tree: the unique point lying on all
// three pairwise paths. Its arclength from a has a closed form in the three
// distances.
double tree_gate_arclength(const Space& space, const Point& a, const Point& b,
                           const Point& y, double path_length) {
  const double day = distance(space, a, y);
  const double dby = distance(space, b, y);
  const double s = 0.5 * (day + path_length - dby);
  return std::clamp(s, 0.0, path_length);
}

}  // namespace

ConvexSetRepr ConvexSetRepr::segment(Geodesic g) {
  return ConvexSetRepr(SegmentSet{std::move(g)});
}

ConvexSetRepr ConvexSetRepr::ball(Point center, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  return ConvexSetRepr(BallSet{std::move(center), radius});
}

ConvexSetRepr ConvexSetRepr::tree_hull(std::vector<Point> points) {
  if (points.empty()) throw DomainError("tree hull needs at least one point");
  return ConvexSetRepr(TreeHullSet{std::move(points)});
}

ProjectionResult project_to_geodesic(const Space& space, const Geodesic& gamma,
                                     const Point& y, double tol) {
  if (!(tol > 0.0)) throw DomainError("projection tolerance must be positive");
  check_point(space, y);

  if (gamma.length <= 1e-12) {
    ProjectionResult r{gamma.start, 0.0, distance(space, gamma.start, y)};
    return r;
  }

  if (space.is_tree()) {
    const double s =
        tree_gate_arclength(space, gamma.start, gamma.end, y, gamma.length);
    const double t = s / gamma.length;
    const Point foot = gamma.at(t);
    return ProjectionResult{foot, t, distance(space, foot, y)};
  }

  // Ternary search; t -> d(gamma(t), y) is convex, plateaus included.
  auto objective = [&](double t) { return distance(space, gamma.at(t), y); };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  double t = 0.5 * (lo + hi);
  // Snap to the endpoints when the minimizer is flush against them.
  if (t < tol) t = 0.0;
  if (t > 1.0 - tol) t = 1.0;
  const Point foot = gamma.at(t);
  return ProjectionResult{foot, t, distance(space, foot, y)};
}

ProjectionResult project_to_convex(const Space& space, const ConvexSetRepr& set,
                                   const Point& y) {
  check_point(space, y);
  if (set.is_segment())
    return project_to_geodesic(space, set.as_segment().segment, y);

  if (set.is_ball()) {
    const auto& ball = set.as_ball();
    const double d = distance(space, ball.center, y);
    if (d <= ball.radius) return ProjectionResult{y, std::nullopt, 0.0};
    const Point foot = combine(space, ball.center, y, ball.radius / d);
    return ProjectionResult{foot, std::nullopt, distance(space, foot, y)};
  }

  const auto& hull = set.as_tree_hull();
  if (!space.is_tree())
    throw UnsupportedError("tree_hull projection requires a tree space");
  ProjectionResult best;
  best.distance = std::numeric_limits<double>::infinity();
  const size_t m = hull.points.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i; j < m; ++j) {
      const Geodesic path = geodesic(space, hull.points[i], hull.points[j]);
      ProjectionResult r = project_to_geodesic(space, path, y);
      r.parameter.reset();
      if (r.distance < best.distance) best = r;
    }
  }
  return best;
}

double projection_inequality_residual(const Space& space,
                                      const ConvexSetRepr& set, const Point& x,
                                      const Point& y) {
  const ProjectionResult member = project_to_convex(space, set, y);
  if (member.distance > kMembershipTol)
    throw PreconditionError("y does not lie in the convex set");
  const ProjectionResult proj = project_to_convex(space, set, x);
  const double dxy = distance(space, x, y);
  const double dyp = distance(space, y, proj.foot);
  return dxy * dxy - dyp * dyp - proj.distance * proj.distance;
}

namespace {

std::vector<Point> sample_set_points(const Space& space,
                                     const ConvexSetRepr& set, int k) {
  std::vector<Point> pts;
  if (set.is_segment()) {
    const Geodesic& g = set.as_segment().segment;
    const int n = std::max(2, k);
    for (int i = 0; i < n; ++i)
      pts.push_back(g.at(static_cast<double>(i) / (n - 1)));
    return pts;
  }
  if (set.is_ball()) {
    const auto& ball = set.as_ball();
    const DirectionFan fan = direction_fan(space, ball.center, k);
    for (const Geodesic& g : fan.geodesics)
      pts.push_back(step_along(space, ball.center, g, ball.radius));
    pts.push_back(ball.center);
    return pts;
  }
  const auto& hull = set.as_tree_hull();
  const size_t m = hull.points.size();
  const size_t pairs = m * (m + 1) / 2;
  const int per_path = std::max<int>(2, k / std::max<size_t>(1, pairs));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i; j < m; ++j) {
      const Geodesic path = geodesic(space, hull.points[i], hull.points[j]);
      for (int s = 0; s < per_path; ++s)
        pts.push_back(path.at(static_cast<double>(s) / (per_path - 1)));
    }
  return pts;
}

}  // namespace

NormalConeResult normal_cone_contains(const Space& space, const Point& p,
                                      const ConvexSetRepr& set, const Point& x,
                                      double angle_tol, int samples) {
  const ProjectionResult member = project_to_convex(space, set, p);
  if (member.distance > kMembershipTol)
    throw PreconditionError("p does not lie in the convex set");
  if (distance(space, p, x) <= 1e-12)
    throw DomainError("normal cone test requires x distinct from p");

  const Geodesic to_x = geodesic(space, p, x);
  const double threshold = M_PI / 2.0 - angle_tol;

  NormalConeResult result;
  result.worst_angle = std::numeric_limits<double>::infinity();
  bool any_below = false, any_below_with_margin = false;
  for (const Point& y : sample_set_points(space, set, samples)) {
    if (distance(space, p, y) <= 1e-12) continue;
    const AngleEstimate est =
        alexandrov_angle(space, to_x, geodesic(space, p, y));
    ++result.samples_used;
    if (est.value < result.worst_angle) {
      result.worst_angle = est.value;
      result.worst_spread = est.spread;
      result.witness = y;
    }
    if (est.value < threshold) {
      any_below = true;
      if (est.value + est.spread < threshold) any_below_with_margin = true;
    }
  }
  if (result.samples_used == 0)
    throw DomainError("no usable sample points in the convex set");
  if (!any_below)
    result.verdict = TriState::yes;
  else if (any_below_with_margin)
    result.verdict = TriState::no;
  else
    result.verdict = TriState::inconclusive;
  return result;
}

MonotonicityResult geodesic_monotonicity_check(const Space& space,
                                               const PointMap& T,
                                               const Point& x0, const Point& x1,
                                               int grid_size) {
  if (grid_size < 3) throw DomainError("monotonicity grid needs >= 3 points");
  constexpr double tol = 1e-9;

  const Point t0 = T(x0);
  std::vector<double> phi(grid_size);
  std::vector<double> alphas(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    alphas[i] = static_cast<double>(i) / (grid_size - 1);
    phi[i] = distance(space, t0, T(combine(space, x0, x1, alphas[i])));
  }

  int direction = 0;  // +1 nondecreasing, -1 nonincreasing
  for (int i = 0; i + 1 < grid_size; ++i) {
    const double delta = phi[i + 1] - phi[i];
    if (std::abs(delta) <= tol) continue;
    const int sign = delta > 0 ? 1 : -1;
    if (direction == 0) {
      direction = sign;
    } else if (sign != direction) {
      return MonotonicityResult{false, alphas[i], alphas[i + 1]};
    }
  }
  return MonotonicityResult{true, 0.0, 0.0};
}

}  // namespace hk
