#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hadamardkit/geometry.hpp"
#include "hadamardkit/sampler.hpp"

namespace hk {

using json = nlohmann::ordered_json;

/// Finite prefix of a sequence plus the window used to estimate tail
/// behaviour: limsups are reported as the max over the last `tail_window`
/// entries.
struct SequenceTrace {
  std::vector<Point> points;
  int tail_window = 0;  // 0 -> default ceil(N/4)

  int effective_window() const;
  int tail_begin() const {
    return static_cast<int>(points.size()) - effective_window();
  }
};

SequenceTrace make_trace(std::vector<Point> points, int tail_window = 0);

enum class VerdictStatus { holds_on_sample, fails, inconclusive };

std::string_view verdict_status_name(VerdictStatus s);

/// Outcome of a sampled diagnostic. `fails` always carries a witness in
/// `details`; every verdict records the approximations in play (finite tail
/// window, finite fans/samples), so nothing here is a proof.
struct Verdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  double margin = 0.0;  // positive slack when holding, violation size when not
  json details;

  bool holds() const { return status == VerdictStatus::holds_on_sample; }
};

/// Basic weak-topology neighbourhood: all projection distances to the listed
/// geodesics stay strictly below epsilon.
struct ElementarySet {
  Point center;
  double epsilon;
  std::vector<Geodesic> geodesics;
};

/// max over the tail window of d(x_n, y).
double asymptotic_radius(const Space& space, const SequenceTrace& trace,
                         const Point& y);

struct AsymptoticCenterOptions {
  int fan_size = 16;
  int max_iters = 300;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int certificate_directions = 8;
};

struct AsymptoticCenterResult {
  Point center;
  double radius = 0.0;
  bool converged = false;
  bool locally_optimal = false;   // fan-perturbation certificate
  double certificate_margin = 0.0;
  int iterations = 0;
};

/// Minimizes the squared asymptotic radius with the descent module, seeded
/// at the last trace point.
AsymptoticCenterResult asymptotic_center(
    const Space& space, const SequenceTrace& trace,
    const AsymptoticCenterOptions& opts = {});

/// Delta-convergence surrogate: the tail-window limsup at x must not exceed
/// the one at any competitor, checked on every suffix window of length >= 2.
/// Suffix windows stand in for the subsequence quantifier; single-element
/// windows are excluded (they would reject every non-constant sequence).
Verdict delta_converges(const Space& space, const SequenceTrace& trace,
                        const Point& x, const std::vector<Point>& competitors,
                        double tol = 1e-8);

/// Default competitor set: 64 space-random points plus the trace points.
std::vector<Point> default_competitors(const Space& space,
                                       const SequenceTrace& trace,
                                       std::uint64_t seed = 0, int count = 64);

/// Convergence of projections along every fan geodesic: holds iff each
/// per-geodesic tail max of d(x, P_gamma x_n) stays within decay_tol.
Verdict weak_converges(const Space& space, const SequenceTrace& trace,
                       const Point& x, const DirectionFan& fan,
                       double decay_tol = 1e-6);

bool elementary_set_contains(const Space& space, const ElementarySet& set,
                             const Point& y);

struct WitnessSearchBudget {
  int max_fan_size = 8;
  int samples = 512;
  int delta_steps = 6;
  std::uint64_t seed = 0;
};

struct WitnessSearchReport {
  enum class Status { found, exhausted };
  Status status = Status::exhausted;
  double delta = 0.0;           // witness neighbourhood radius when found
  int fan_size = 0;             // witness fan size when found
  int members_checked = 0;      // sampled members of the inner set
  std::optional<Point> counterexample;  // last sampled escape point
  json details;
};

/// Monte-Carlo search for an inner elementary set U_x(delta; eta_1..eta_k)
/// whose sampled members all stay inside U_x(epsilon; gamma).
WitnessSearchReport weakly_proper_witness_search(const Space& space,
                                                 const Point& x, double epsilon,
                                                 const Geodesic& gamma,
                                                 const WitnessSearchBudget&
                                                     budget = {});

/// Tail-window max of |<x x_n, x y>| per test point.
Verdict kakavandi_converges(const Space& space, const SequenceTrace& trace,
                            const Point& x,
                            const std::vector<Point>& test_points,
                            double tol = 1e-6);

}  // namespace hk
