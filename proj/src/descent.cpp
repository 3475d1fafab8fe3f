#include "hadamardkit/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hk {

namespace {

double sq(double x) { return x * x; }

double norm2(const Point::Coords& c) {
  double s = 0.0;
  for (double x : c) s += sq(x);
  return std::sqrt(s);
}

}  // namespace

ScalarField ScalarField::frechet(std::vector<Point> anchors,
                                 std::vector<double> weights) {
  if (anchors.empty()) throw DomainError("frechet field needs anchors");
  if (weights.size() != anchors.size())
    throw DomainError("frechet field needs one weight per anchor");
  for (double w : weights)
    if (!(w > 0.0)) throw DomainError("frechet weights must be positive");
  return ScalarField(FrechetField{std::move(anchors), std::move(weights)});
}

ScalarField ScalarField::distance_to(Point target) {
  return ScalarField(DistanceToField{std::move(target)});
}

ScalarField ScalarField::coordinate(int index) {
  if (index < 0) throw DomainError("coordinate index must be nonnegative");
  return ScalarField(CoordinateField{index});
}

ScalarField ScalarField::two_quadrant_norm(double plateau) {
  return ScalarField(TwoQuadrantNormField{plateau});
}

ScalarField ScalarField::affine_1d() { return ScalarField(Affine1dField{}); }

ScalarField ScalarField::scaled(double factor, ScalarField inner) {
  return ScalarField(
      ScaledField{factor, std::make_shared<ScalarField>(std::move(inner))});
}

ScalarField ScalarField::sum(std::vector<ScalarField> terms) {
  SumField s;
  for (auto& t : terms)
    s.terms.push_back(std::make_shared<ScalarField>(std::move(t)));
  return ScalarField(std::move(s));
}

double ScalarField::eval(const Space& space, const Point& x) const {
  struct Visitor {
    const Space& space;
    const Point& x;

    double operator()(const FrechetField& f) const {
      double total = 0.0;
      for (size_t i = 0; i < f.anchors.size(); ++i)
        total += f.weights[i] * sq(distance(space, x, f.anchors[i]));
      return total;
    }
    double operator()(const DistanceToField& f) const {
      return distance(space, x, f.target);
    }
    double operator()(const CoordinateField& f) const {
      if (space.kind() != SpaceKind::euclidean &&
          space.kind() != SpaceKind::two_quadrant)
        throw KindMismatchError("coordinate field needs coordinates");
      const auto& c = x.as_coords();
      if (f.index >= static_cast<int>(c.size()))
        throw DomainError("coordinate index out of range");
      return c[f.index];
    }
    double operator()(const TwoQuadrantNormField& f) const {
      if (space.kind() != SpaceKind::two_quadrant)
        throw KindMismatchError("norm field lives on the two-quadrant space");
      const auto& c = x.as_coords();
      const bool origin = std::abs(c[0]) < 1e-12 && std::abs(c[1]) < 1e-12;
      if (c[0] <= 0.0 && c[1] <= 0.0 && !origin) return 0.0;
      if (std::abs(c[0]) < 1e-12 && c[1] >= 0.0) return f.plateau;
      return norm2(c);
    }
    double operator()(const Affine1dField&) const {
      if (space.kind() != SpaceKind::euclidean || space.dim() != 1)
        throw KindMismatchError("affine_1d field lives on euclidean(1)");
      return x.as_coords()[0];
    }
    double operator()(const ScaledField& f) const {
      return f.factor * f.inner->eval(space, x);
    }
    double operator()(const SumField& f) const {
      double total = 0.0;
      for (const auto& t : f.terms) total += t->eval(space, x);
      return total;
    }
  };
  return std::visit(Visitor{space, x}, rep_);
}

DerivativeEstimate geodesic_derivative(const Space& space, const Objective& f,
                                       const Point& x, const Geodesic& gamma,
                                       const DerivativeSchedule& schedule) {
  if (gamma.length <= 1e-12)
    throw DomainError(
        "zero-length direction: use trivial_derivative with a fan");
  if (distance(space, gamma.start, x) > 1e-9)
    throw DomainError("direction does not start at x");
  if (schedule.steps < 2 || !(schedule.t0 > 0.0) || schedule.t0 > 1.0)
    throw DomainError("invalid derivative schedule");

  DerivativeEstimate est;
  const double fx = f(x);
  double t = schedule.t0;
  for (int k = 0; k < schedule.steps; ++k, t *= 0.5) {
    const double arclength = t * gamma.length;
    if (arclength < 1e-10) break;  // below this the quotient is pure noise
    est.scales.push_back(t);
    est.quotients.push_back((f(gamma.at(t)) - fx) / arclength);
  }
  if (est.quotients.size() < 2)
    throw DomainError("derivative schedule left fewer than two usable scales");

  // One-step Richardson on the halving schedule: r_k = 2 q_{k+1} - q_k.
  std::vector<double> extrapolated;
  for (size_t k = 0; k + 1 < est.quotients.size(); ++k)
    extrapolated.push_back(2.0 * est.quotients[k + 1] - est.quotients[k]);
  est.value = extrapolated.back();
  est.residual = extrapolated.size() >= 2
                     ? std::abs(extrapolated.back() -
                                extrapolated[extrapolated.size() - 2])
                     : std::abs(est.quotients.back() - est.value);
  return est;
}

DerivativeEstimate geodesic_derivative(const Space& space,
                                       const ScalarField& field, const Point& x,
                                       const Geodesic& gamma,
                                       const DerivativeSchedule& schedule) {
  return geodesic_derivative(
      space, [&](const Point& p) { return field.eval(space, p); }, x, gamma,
      schedule);
}

double trivial_derivative(const Space& space, const Objective& f,
                          const Point& x, const DirectionFan& fan,
                          const DerivativeSchedule& schedule) {
  if (fan.geodesics.empty()) throw DomainError("empty direction fan");
  double best = std::numeric_limits<double>::infinity();
  for (const Geodesic& g : fan.geodesics)
    best = std::min(best, geodesic_derivative(space, f, x, g, schedule).value);
  return best;
}

namespace {

// Midpoint direction between two fan directions: aim at the midpoint of the
// endpoints and re-cap at the shorter length. Well defined in every model
// space; callers skip it for trees.
Geodesic bisect_direction(const Space& space, const Point& x, const Geodesic& a,
                          const Geodesic& b) {
  const Point mid = combine(space, a.end, b.end, 0.5);
  Geodesic g = geodesic(space, x, mid);
  const double target = std::min(a.length, b.length);
  if (g.length > 1e-12 && g.length > target)
    g = geodesic(space, x, combine(space, x, mid, target / g.length));
  return g;
}

struct Candidate {
  Geodesic direction;
  double value;
  double residual;
  std::string label;
  std::size_t index;
};

}  // namespace

SteepestResult steepest_direction(const Space& space, const Objective& f,
                                  const Point& x, const DirectionFan& fan,
                                  int refine_rounds,
                                  const DerivativeSchedule& schedule) {
  if (fan.geodesics.size() < 2)
    throw DomainError("steepest direction search needs a fan with >= 2 directions");

  std::vector<Candidate> candidates;
  SteepestResult result;
  for (size_t i = 0; i < fan.geodesics.size(); ++i) {
    const DerivativeEstimate est =
        geodesic_derivative(space, f, x, fan.geodesics[i], schedule);
    if (!std::isfinite(est.value)) continue;
    candidates.push_back(
        {fan.geodesics[i], est.value, est.residual, fan.labels[i], i});
    result.fan_values.push_back(est.value);
  }
  if (candidates.empty())
    throw DomainError("no finite derivative estimate on the fan");

  auto pick = [&](bool minimize) {
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
      const bool better = minimize ? candidates[i].value < candidates[best].value
                                   : candidates[i].value > candidates[best].value;
      if (better) best = i;  // ties keep the lowest fan index
    }
    return best;
  };

  const bool refinable = !space.is_tree() && refine_rounds > 0;
  auto refine = [&](size_t best_idx, bool minimize) -> Candidate {
    Candidate best = candidates[best_idx];
    if (!refinable) return best;
    // Flanking directions: the angularly nearest two other fan members.
    std::vector<std::pair<double, size_t>> by_angle;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (i == best_idx) continue;
      by_angle.push_back(
          {comparison_angle(space, x, best.direction.at(1.0),
                            candidates[i].direction.at(1.0)),
           i});
    }
    std::sort(by_angle.begin(), by_angle.end());
    std::vector<Geodesic> flanks;
    for (size_t i = 0; i < by_angle.size() && flanks.size() < 2; ++i)
      flanks.push_back(candidates[by_angle[i].second].direction);

    std::size_t synthetic_index = fan.geodesics.size();
    for (int round = 0; round < refine_rounds && !flanks.empty(); ++round) {
      std::vector<Geodesic> next_flanks;
      for (const Geodesic& flank : flanks) {
        const Geodesic mid = bisect_direction(space, x, best.direction, flank);
        if (mid.length <= 1e-12) continue;
        const DerivativeEstimate est =
            geodesic_derivative(space, f, x, mid, schedule);
        const bool better = minimize ? est.value < best.value
                                     : est.value > best.value;
        if (better) {
          // Bracket shifts: the previous best becomes a flank.
          next_flanks.push_back(best.direction);
          best = {mid, est.value, est.residual, best.label + "*",
                  synthetic_index++};
        } else {
          // Bracket narrows toward the best direction.
          next_flanks.push_back(mid);
        }
      }
      flanks = std::move(next_flanks);
    }
    return best;
  };

  const size_t imin = pick(true);
  const size_t imax = pick(false);
  const Candidate cmin = refine(imin, true);
  const Candidate cmax = refine(imax, false);
  result.min = {cmin.direction, cmin.value, cmin.residual, cmin.label,
                cmin.index};
  result.max = {cmax.direction, cmax.value, cmax.residual, cmax.label,
                cmax.index};
  return result;
}

std::string_view descent_termination_name(DescentTermination t) {
  switch (t) {
    case DescentTermination::stationary: return "stationary";
    case DescentTermination::max_iters: return "max_iters";
    case DescentTermination::line_search_failure: return "line_search_failure";
  }
  return "unknown";
}

DescentReport descent_minimize(const Space& space, const Objective& f,
                               const Point& x0, const DescentOptions& opts) {
  if (!(opts.armijo_c > 0.0 && opts.armijo_c < 1.0))
    throw DomainError("armijo constant must lie in (0,1)");
  if (!(opts.backtrack > 0.0 && opts.backtrack < 1.0))
    throw DomainError("backtracking factor must lie in (0,1)");
  if (!(opts.step0 > 0.0) || opts.max_iters < 1 || opts.fan_size < 2)
    throw DomainError("invalid descent options");

  DescentReport report;
  Point x = x0;
  double fx = f(x);
  report.iterates.push_back(x);
  report.termination = DescentTermination::max_iters;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const DirectionFan fan =
        direction_fan(space, x, opts.fan_size, opts.seed + 1315423911ull * iter);
    SteepestResult sd;
    if (fan.geodesics.size() == 1) {
      // Leaf vertex in a tree: a single admissible direction.
      const DerivativeEstimate est =
          geodesic_derivative(space, f, x, fan.geodesics[0]);
      sd.min = {fan.geodesics[0], est.value, est.residual, fan.labels[0], 0};
      sd.max = sd.min;
      sd.fan_values = {est.value};
    } else {
      sd = steepest_direction(space, f, x, fan, opts.refine_rounds);
    }
    report.final_min_derivative = sd.min.value;
    if (sd.min.value >= -opts.tol) {
      report.termination = DescentTermination::stationary;
      break;
    }

    bool accepted = false;
    double step = opts.step0;
    for (int bt = 0; bt < opts.max_backtracks; ++bt, step *= opts.backtrack) {
      bool clamped = false;
      const Point candidate = step_along(space, x, sd.min.direction, step, &clamped);
      const double actual = distance(space, x, candidate);
      if (actual <= 1e-15) continue;
      const double fc = f(candidate);
      if (fc <= fx + opts.armijo_c * actual * sd.min.value) {
        report.rows.push_back({iter, fc, actual, sd.min.label, sd.min.value,
                               clamped});
        x = candidate;
        fx = fc;
        report.iterates.push_back(x);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.termination = DescentTermination::line_search_failure;
      break;
    }
  }

  report.final_objective = fx;
  return report;
}

DescentReport descent_minimize(const Space& space, const ScalarField& field,
                               const Point& x0, const DescentOptions& opts) {
  return descent_minimize(
      space, [&](const Point& p) { return field.eval(space, p); }, x0, opts);
}

}  // namespace hk
