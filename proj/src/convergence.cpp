#include "hadamardkit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hadamardkit/convex.hpp"
#include "hadamardkit/descent.hpp"

namespace hk {

int SequenceTrace::effective_window() const {
  const int n = static_cast<int>(points.size());
  if (tail_window > 0) return std::min(tail_window, n);
  return (n + 3) / 4;  // ceil(N/4)
}

SequenceTrace make_trace(std::vector<Point> points, int tail_window) {
  if (points.size() < 2)
    throw DomainError("a sequence trace needs at least two points");
  if (tail_window > static_cast<int>(points.size()))
    throw DomainError("tail window exceeds trace length");
  if (tail_window < 0) throw DomainError("tail window must be nonnegative");
  return SequenceTrace{std::move(points), tail_window};
}

std::string_view verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds_on_sample: return "holds_on_sample";
    case VerdictStatus::fails: return "fails";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double asymptotic_radius(const Space& space, const SequenceTrace& trace,
                         const Point& y) {
  const int n = static_cast<int>(trace.points.size());
  double radius = 0.0;
  for (int i = trace.tail_begin(); i < n; ++i)
    radius = std::max(radius, distance(space, trace.points[i], y));
  return radius;
}

AsymptoticCenterResult asymptotic_center(const Space& space,
                                         const SequenceTrace& trace,
                                         const AsymptoticCenterOptions& opts) {
  // Squared radius: a max of squared distances, convex on the space.
  const auto objective = [&](const Point& y) {
    const double r = asymptotic_radius(space, trace, y);
    return r * r;
  };

  DescentOptions dopts;
  dopts.fan_size = opts.fan_size;
  dopts.max_iters = opts.max_iters;
  dopts.tol = opts.tol;
  dopts.seed = opts.seed;
  const DescentReport report =
      descent_minimize(space, objective, trace.points.back(), dopts);

  AsymptoticCenterResult result;
  result.center = report.iterates.back();
  result.radius = asymptotic_radius(space, trace, result.center);
  result.converged = report.termination == DescentTermination::stationary;
  result.iterations = static_cast<int>(report.rows.size());

  // Local optimality certificate: the radius at small fan perturbations of
  // the result must not undercut the achieved radius.
  result.locally_optimal = true;
  result.certificate_margin = std::numeric_limits<double>::infinity();
  const DirectionFan fan =
      direction_fan(space, result.center, opts.certificate_directions, opts.seed);
  for (const Geodesic& g : fan.geodesics) {
    for (double scale : {1e-2, 1e-3}) {
      const Point perturbed =
          combine(space, result.center, g.end, std::min(1.0, scale / g.length));
      const double r = asymptotic_radius(space, trace, perturbed);
      result.certificate_margin =
          std::min(result.certificate_margin, r - result.radius);
      if (r + 1e-7 < result.radius) result.locally_optimal = false;
    }
  }
  return result;
}

Verdict delta_converges(const Space& space, const SequenceTrace& trace,
                        const Point& x, const std::vector<Point>& competitors,
                        double tol) {
  if (competitors.empty())
    throw DomainError("delta convergence check needs competitors");
  const int n = static_cast<int>(trace.points.size());
  const int window = trace.effective_window();

  Verdict verdict;
  verdict.details["approximation"] =
      "subsequence quantifier approximated by suffix windows of length >= 2";
  verdict.details["tail_window"] = window;

  // Precompute d(x_i, x) once; competitor distances are needed per window.
  std::vector<double> to_x(n);
  for (int i = 0; i < n; ++i) to_x[i] = distance(space, trace.points[i], x);

  double worst_margin = std::numeric_limits<double>::infinity();
  // Suffix windows [s, n) for s = n - window .. n - 2; a window of one is
  // only used when the trace's tail window itself is a singleton.
  const int last_start = std::max(n - window, n - 2);
  for (int s = n - window; s <= last_start; ++s) {
    double limsup_x = 0.0;
    for (int i = s; i < n; ++i) limsup_x = std::max(limsup_x, to_x[i]);
    for (size_t c = 0; c < competitors.size(); ++c) {
      double limsup_y = 0.0;
      for (int i = s; i < n; ++i)
        limsup_y =
            std::max(limsup_y, distance(space, trace.points[i], competitors[c]));
      const double margin = limsup_y + tol - limsup_x;
      if (margin < worst_margin) {
        worst_margin = margin;
        verdict.details["worst_case"] = {
            {"suffix_start", s},
            {"competitor_index", c},
            {"limsup_at_x", limsup_x},
            {"limsup_at_competitor", limsup_y}};
      }
      if (margin < 0.0) {
        verdict.status = VerdictStatus::fails;
        verdict.margin = margin;
        verdict.details["witness"] = verdict.details["worst_case"];
        return verdict;
      }
    }
  }
  verdict.status = VerdictStatus::holds_on_sample;
  verdict.margin = worst_margin;
  return verdict;
}

std::vector<Point> default_competitors(const Space& space,
                                       const SequenceTrace& trace,
                                       std::uint64_t seed, int count) {
  Sampler sampler(seed);
  std::vector<Point> competitors;
  competitors.reserve(count + trace.points.size());
  for (int i = 0; i < count; ++i)
    competitors.push_back(sample_point(space, sampler));
  competitors.insert(competitors.end(), trace.points.begin(),
                     trace.points.end());
  return competitors;
}

Verdict weak_converges(const Space& space, const SequenceTrace& trace,
                       const Point& x, const DirectionFan& fan,
                       double decay_tol) {
  if (distance(space, fan.base, x) > 1e-9)
    throw DomainError("fan must be based at the candidate limit");
  if (fan.geodesics.empty()) throw DomainError("empty direction fan");

  const int n = static_cast<int>(trace.points.size());
  const int tail = trace.tail_begin();

  Verdict verdict;
  verdict.details["decay_tol"] = decay_tol;
  verdict.details["tail_window"] = trace.effective_window();

  double trace_reach = 0.0;
  for (const Point& p : trace.points)
    trace_reach = std::max(trace_reach, distance(space, x, p));
  verdict.details["max_distance_to_limit"] = trace_reach;

  double worst = 0.0;
  int worst_geodesic = -1, worst_index = -1;
  json profiles = json::array();
  for (size_t gi = 0; gi < fan.geodesics.size(); ++gi) {
    const Geodesic& g = fan.geodesics[gi];
    json profile = json::array();
    double tail_max = 0.0;
    int tail_arg = -1;
    for (int i = 0; i < n; ++i) {
      const ProjectionResult proj =
          project_to_geodesic(space, g, trace.points[i]);
      const double v = distance(space, x, proj.foot);
      profile.push_back(v);
      if (i >= tail && v >= tail_max) {
        tail_max = v;
        tail_arg = i;
      }
    }
    profiles.push_back({{"label", fan.labels[gi]},
                        {"tail_max", tail_max},
                        {"values", std::move(profile)}});
    if (tail_max > worst) {
      worst = tail_max;
      worst_geodesic = static_cast<int>(gi);
      worst_index = tail_arg;
    }
  }
  verdict.details["profiles"] = std::move(profiles);
  verdict.details["decay_bound"] = worst;
  verdict.margin = decay_tol - worst;
  if (worst <= decay_tol) {
    verdict.status = VerdictStatus::holds_on_sample;
  } else {
    verdict.status = VerdictStatus::fails;
    verdict.details["witness"] = {{"geodesic_index", worst_geodesic},
                                  {"trace_index", worst_index},
                                  {"projection_distance", worst}};
  }
  return verdict;
}

bool elementary_set_contains(const Space& space, const ElementarySet& set,
                             const Point& y) {
  for (const Geodesic& g : set.geodesics) {
    const ProjectionResult proj = project_to_geodesic(space, g, y);
    if (!(distance(space, set.center, proj.foot) < set.epsilon)) return false;
  }
  return true;
}

WitnessSearchReport weakly_proper_witness_search(
    const Space& space, const Point& x, double epsilon, const Geodesic& gamma,
    const WitnessSearchBudget& budget) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (distance(space, gamma.start, x) > 1e-9)
    throw DomainError("gamma must start at x");

  WitnessSearchReport report;
  json tried = json::array();
  const ElementarySet outer{x, epsilon, {gamma}};

  for (int k = 1; k <= budget.max_fan_size; ++k) {
    DirectionFan fan;
    try {
      fan = direction_fan(space, x, k, budget.seed);
    } catch (const DomainError&) {
      continue;
    }
    double delta = epsilon;
    for (int step = 0; step < budget.delta_steps; ++step, delta *= 0.5) {
      const ElementarySet inner{x, delta, fan.geodesics};
      Sampler sampler(budget.seed * 1000003ull + k * 101 + step);
      int members = 0;
      std::optional<Point> escape;
      for (int s = 0; s < budget.samples; ++s) {
        const Point y = sample_point(space, sampler);
        if (!elementary_set_contains(space, inner, y)) continue;
        ++members;
        if (!elementary_set_contains(space, outer, y)) {
          escape = y;
          break;
        }
      }
      tried.push_back({{"fan_size", static_cast<int>(fan.geodesics.size())},
                       {"delta", delta},
                       {"members", members},
                       {"escaped", escape.has_value()}});
      // A candidate with no sampled members is no evidence either way.
      if (!escape && members > 0) {
        report.status = WitnessSearchReport::Status::found;
        report.delta = delta;
        report.fan_size = static_cast<int>(fan.geodesics.size());
        report.members_checked = members;
        report.details["tried"] = std::move(tried);
        return report;
      }
      report.counterexample = escape;
    }
  }
  report.details["tried"] = std::move(tried);
  return report;
}

Verdict kakavandi_converges(const Space& space, const SequenceTrace& trace,
                            const Point& x,
                            const std::vector<Point>& test_points,
                            double tol) {
  if (test_points.empty())
    throw DomainError("kakavandi check needs test points");
  const int n = static_cast<int>(trace.points.size());
  const int tail = trace.tail_begin();

  Verdict verdict;
  verdict.details["tol"] = tol;
  verdict.details["tail_window"] = trace.effective_window();

  double worst = 0.0;
  int worst_test = -1, worst_index = -1;
  for (size_t ti = 0; ti < test_points.size(); ++ti) {
    for (int i = tail; i < n; ++i) {
      const double v = std::abs(
          quasilinearization(space, x, trace.points[i], x, test_points[ti]));
      if (v > worst) {
        worst = v;
        worst_test = static_cast<int>(ti);
        worst_index = i;
      }
    }
  }
  verdict.details["worst_pairing"] = worst;
  verdict.margin = tol - worst;
  if (worst <= tol) {
    verdict.status = VerdictStatus::holds_on_sample;
  } else {
    verdict.status = VerdictStatus::fails;
    verdict.details["witness"] = {{"test_point_index", worst_test},
                                  {"trace_index", worst_index},
                                  {"pairing", worst}};
  }
  return verdict;
}

}  // namespace hk
