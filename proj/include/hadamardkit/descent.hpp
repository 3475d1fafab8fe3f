#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hadamardkit/sampler.hpp"

namespace hk {

// ---- scalar field catalog ------------------------------------------------

struct FrechetField {
  std::vector<Point> anchors;
  std::vector<double> weights;  // positive; f(x) = sum w_i d(x, a_i)^2
};

struct DistanceToField {
  Point target;
};

struct CoordinateField {
  int index = 0;  // euclidean / two_quadrant only
};

/// Piecewise field on the two-quadrant space: 0 on the punctured negative
/// square, a plateau constant on the nonnegative ordinate axis, the norm
/// elsewhere. The plateau defaults to 0, which makes the field continuous
/// at the origin; any other value puts a jump next to the origin and the
/// one-sided quotients along off-axis directions diverge there.
struct TwoQuadrantNormField {
  double plateau = 0.0;
};

/// f(x) = x on the real line.
struct Affine1dField {};

class ScalarField;

struct ScaledField {
  double factor = 1.0;
  std::shared_ptr<const ScalarField> inner;
};

struct SumField {
  std::vector<std::shared_ptr<const ScalarField>> terms;
};

class ScalarField {
 public:
  using Rep = std::variant<FrechetField, DistanceToField, CoordinateField,
                           TwoQuadrantNormField, Affine1dField, ScaledField,
                           SumField>;

  static ScalarField frechet(std::vector<Point> anchors,
                             std::vector<double> weights);
  static ScalarField distance_to(Point target);
  static ScalarField coordinate(int index);
  static ScalarField two_quadrant_norm(double plateau = 0.0);
  static ScalarField affine_1d();
  static ScalarField scaled(double factor, ScalarField inner);
  static ScalarField sum(std::vector<ScalarField> terms);

  double eval(const Space& space, const Point& x) const;
  const Rep& rep() const { return rep_; }

 private:
  explicit ScalarField(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

using Objective = std::function<double(const Point&)>;

// ---- directional derivatives ----------------------------------------------

struct DerivativeSchedule {
  double t0 = 0.25;
  int steps = 17;  // t_k = t0 * 2^-k, k = 0..steps-1
};

struct DerivativeEstimate {
  double value = 0.0;
  double residual = 0.0;  // spread of the extrapolation tail, never dropped
  std::vector<double> scales;
  std::vector<double> quotients;
};

/// One-sided difference quotients of f along gamma at shrinking scales with
/// one-step Richardson extrapolation.
DerivativeEstimate geodesic_derivative(const Space& space, const Objective& f,
                                       const Point& x, const Geodesic& gamma,
                                       const DerivativeSchedule& schedule = {});

DerivativeEstimate geodesic_derivative(const Space& space,
                                       const ScalarField& field, const Point& x,
                                       const Geodesic& gamma,
                                       const DerivativeSchedule& schedule = {});

/// Finite surrogate for the derivative along the trivial direction: the
/// minimum of the fan derivatives. An upper estimate of the infimum over
/// all vanishing directions.
double trivial_derivative(const Space& space, const Objective& f,
                          const Point& x, const DirectionFan& fan,
                          const DerivativeSchedule& schedule = {});

struct DirectionValue {
  Geodesic direction;
  double value = 0.0;
  double residual = 0.0;
  std::string label;
  std::size_t fan_index = 0;
};

struct SteepestResult {
  DirectionValue min;  // steepest descent
  DirectionValue max;  // steepest ascent
  std::vector<double> fan_values;
};

/// Evaluates the derivative along every fan direction; optional local
/// bisection refinement between the best direction and its neighbours
/// (skipped in trees, where the fan is already exhaustive). Ties break
/// toward the lowest fan index.
SteepestResult steepest_direction(const Space& space, const Objective& f,
                                  const Point& x, const DirectionFan& fan,
                                  int refine_rounds = 0,
                                  const DerivativeSchedule& schedule = {});

// ---- descent loop ----------------------------------------------------------

struct DescentOptions {
  int fan_size = 16;
  int max_iters = 500;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double step0 = 1.0;
  double tol = 1e-7;
  int refine_rounds = 3;
  int max_backtracks = 60;
  std::uint64_t seed = 0;
};

enum class DescentTermination { stationary, max_iters, line_search_failure };

std::string_view descent_termination_name(DescentTermination t);

struct DescentIteration {
  int iteration = 0;
  double objective = 0.0;
  double step = 0.0;           // accepted arclength
  std::string direction_label;
  double derivative = 0.0;     // estimate along the chosen direction
  bool step_clamped = false;
};

struct DescentReport {
  std::vector<Point> iterates;  // x0 first, final point last
  std::vector<DescentIteration> rows;
  DescentTermination termination = DescentTermination::max_iters;
  double final_objective = 0.0;
  double final_min_derivative = 0.0;
};

DescentReport descent_minimize(const Space& space, const Objective& f,
                               const Point& x0, const DescentOptions& opts = {});

DescentReport descent_minimize(const Space& space, const ScalarField& field,
                               const Point& x0, const DescentOptions& opts = {});

}  // namespace hk
