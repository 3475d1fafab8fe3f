#include "hadamardkit/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace hk {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double x) { return x * x; }

// Radical-inverse (van der Corput) sequence in the given prime base.
double radical_inverse(int base, int index) {
  double inv = 1.0 / base, f = inv, value = 0.0;
  while (index > 0) {
    value += f * (index % base);
    index /= base;
    f *= inv;
  }
  return value;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  p = std::clamp(p, 1e-12, 1.0 - 1e-12);
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::vector<double> unit_vector(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += sq(x);
  n = std::sqrt(n);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

// Minkowski-orthonormal tangent basis at a hyperboloid point.
void hyperbolic_tangent_basis(const Point::Coords& x, Point::Coords& e1,
                              Point::Coords& e2) {
  auto mink = [](const Point::Coords& a, const Point::Coords& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };
  auto project = [&](Point::Coords v) {
    const double m = mink(x, v);  // <x,x> = -1
    for (int i = 0; i < 3; ++i) v[i] += m * x[i];
    return v;
  };
  e1 = project({0.0, 1.0, 0.0});
  double n1 = mink(e1, e1);
  if (n1 < 1e-12) {
    e1 = project({0.0, 0.0, 1.0});
    n1 = mink(e1, e1);
  }
  for (double& v : e1) v /= std::sqrt(n1);
  e2 = project({0.0, 0.0, 1.0});
  const double m12 = mink(e1, e2);
  for (int i = 0; i < 3; ++i) e2[i] -= m12 * e1[i];
  double n2 = mink(e2, e2);
  if (n2 < 1e-12) {
    e2 = project({0.0, 1.0, 0.0});
    const double m = mink(e1, e2);
    for (int i = 0; i < 3; ++i) e2[i] -= m * e1[i];
    n2 = mink(e2, e2);
  }
  for (double& v : e2) v /= std::sqrt(n2);
}

Point::Coords hyperbolic_exp(const Point::Coords& x, const Point::Coords& u,
                             double r) {
  Point::Coords out(3);
  const double c = std::cosh(r), s = std::sinh(r);
  for (int i = 0; i < 3; ++i) out[i] = c * x[i] + s * u[i];
  const double q = sq(out[0]) - sq(out[1]) - sq(out[2]);
  if (q > 0.0) {
    const double f = 1.0 / std::sqrt(q);
    for (double& v : out) v *= f;
  }
  return out;
}

}  // namespace

double Sampler::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on engine-derived uniforms keeps the stream reproducible.
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Point sample_point(const Space& space, Sampler& sampler) {
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      Point::Coords c(space.dim());
      for (double& x : c) x = sampler.uniform(-1.0, 1.0);
      return Point::coords(std::move(c));
    }
    case SpaceKind::two_quadrant: {
      const bool positive = sampler.uniform() < 0.5;
      const double x = sampler.uniform(), y = sampler.uniform();
      return positive ? Point::coords({x, y}) : Point::coords({-x, -y});
    }
    case SpaceKind::hyperbolic2: {
      const double theta = sampler.uniform(0.0, 2.0 * kPi);
      const double r = 3.0 * sampler.uniform();
      Point::Coords base{1.0, 0.0, 0.0};
      Point::Coords u{0.0, std::cos(theta), std::sin(theta)};
      return Point::coords(hyperbolic_exp(base, u, r));
    }
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree: {
      const TreeGraph& g = space.tree();
      if (g.edge_count() == 0) return Point::tree_vertex(0);
      // Edge chosen with probability proportional to its length.
      const double target = sampler.uniform() * g.total_length();
      double acc = 0.0;
      int chosen = g.edge_count() - 1;
      for (int e = 0; e < g.edge_count(); ++e) {
        acc += g.edge(e).length;
        if (target <= acc) {
          chosen = e;
          break;
        }
      }
      const double off = sampler.uniform() * g.edge(chosen).length;
      return normalize_point(space, Point::tree_edge(chosen, off));
    }
    case SpaceKind::product:
      return Point::pair(sample_point(space.left(), sampler),
                         sample_point(space.right(), sampler));
  }
  throw KindMismatchError("unhandled space kind");
}

namespace {

// Largest step from c along u staying inside the axis-aligned box [lo,hi]^2.
double box_reach(const Point::Coords& c, double ux, double uy, double lo,
                 double hi) {
  double reach = std::numeric_limits<double>::infinity();
  if (ux > 1e-15) reach = std::min(reach, (hi - c[0]) / ux);
  if (ux < -1e-15) reach = std::min(reach, (lo - c[0]) / ux);
  if (uy > 1e-15) reach = std::min(reach, (hi - c[1]) / uy);
  if (uy < -1e-15) reach = std::min(reach, (lo - c[1]) / uy);
  return std::max(0.0, reach);
}

void append_direction(DirectionFan& fan, const Space& space, const Point& x,
                      const Point& end, std::string label) {
  const Geodesic g = geodesic(space, x, end);
  if (g.length <= 1e-12) return;
  fan.geodesics.push_back(g);
  fan.labels.push_back(std::move(label));
}

}  // namespace

DirectionFan direction_fan(const Space& space, const Point& x, int k,
                           std::uint64_t seed) {
  if (k < 1) throw DomainError("direction fan needs k >= 1");
  check_point(space, x);
  DirectionFan fan;
  fan.base = x;
  Sampler jitter(seed * 1315423911ull + 17);

  switch (space.kind()) {
    case SpaceKind::euclidean: {
      const int n = space.dim();
      const auto& c = x.as_coords();
      if (n == 1) {
        for (int i = 0; i < std::min(k, 2); ++i) {
          const double dir = i == 0 ? 1.0 : -1.0;
          append_direction(fan, space, x, Point::coords({c[0] + dir}),
                           dir > 0 ? "+1" : "-1");
        }
        fan.truncated = k > 2;
        break;
      }
      if (n == 2) {
        const double phase = jitter.uniform(0.0, 2.0 * kPi / k);
        for (int i = 0; i < k; ++i) {
          const double th = phase + 2.0 * kPi * i / k;
          append_direction(
              fan, space, x,
              Point::coords({c[0] + std::cos(th), c[1] + std::sin(th)}),
              "angle" + std::to_string(i));
        }
        break;
      }
      // Low-discrepancy set on the sphere: normal quantiles of a Halton
      // sequence, plus a small seeded jitter, renormalized.
      for (int i = 0; i < k; ++i) {
        std::vector<double> v(n);
        for (int d = 0; d < n; ++d)
          v[d] = normal_quantile(radical_inverse(kPrimes[d % 12], i + 1)) +
                 0.05 * jitter.normal();
        const auto u = unit_vector(v);
        Point::Coords end(c);
        for (int d = 0; d < n; ++d) end[d] += u[d];
        append_direction(fan, space, x, Point::coords(std::move(end)),
                         "dir" + std::to_string(i));
      }
      break;
    }
    case SpaceKind::two_quadrant: {
      const auto& c = x.as_coords();
      const bool at_origin = std::abs(c[0]) < 1e-12 && std::abs(c[1]) < 1e-12;
      if (at_origin) {
        const int half = std::max(1, k / 2);
        for (int i = 0; i < half; ++i) {
          const double th = (i + 0.5) * (kPi / 2.0) / half;
          const double ux = std::cos(th), uy = std::sin(th);
          const double r = std::min(1.0, box_reach(c, ux, uy, 0.0, 1.0));
          if (r > 1e-12)
            append_direction(fan, space, x,
                             Point::coords({r * ux, r * uy}),
                             "pos" + std::to_string(i));
        }
        for (int i = 0; i < half; ++i) {
          const double th = kPi + (i + 0.5) * (kPi / 2.0) / half;
          const double ux = std::cos(th), uy = std::sin(th);
          const double r = std::min(1.0, box_reach(c, ux, uy, -1.0, 0.0));
          if (r > 1e-12)
            append_direction(fan, space, x,
                             Point::coords({r * ux, r * uy}),
                             "neg" + std::to_string(i));
        }
        break;
      }
      const bool positive = c[0] > 0.0 || c[1] > 0.0;
      const double lo = positive ? 0.0 : -1.0;
      const double hi = positive ? 1.0 : 0.0;
      const double phase = jitter.uniform(0.0, 2.0 * kPi / k);
      for (int i = 0; i < k; ++i) {
        const double th = phase + 2.0 * kPi * i / k;
        const double ux = std::cos(th), uy = std::sin(th);
        const double r = std::min(1.0, box_reach(c, ux, uy, lo, hi));
        if (r <= 1e-9) continue;  // direction leaves the square immediately
        append_direction(fan, space, x,
                         Point::coords({c[0] + r * ux, c[1] + r * uy}),
                         "angle" + std::to_string(i));
      }
      fan.truncated = static_cast<int>(fan.geodesics.size()) < k;
      break;
    }
    case SpaceKind::hyperbolic2: {
      const auto& c = x.as_coords();
      Point::Coords e1, e2;
      hyperbolic_tangent_basis(c, e1, e2);
      const double phase = jitter.uniform(0.0, 2.0 * kPi / k);
      for (int i = 0; i < k; ++i) {
        const double th = phase + 2.0 * kPi * i / k;
        Point::Coords u(3);
        for (int d = 0; d < 3; ++d)
          u[d] = std::cos(th) * e1[d] + std::sin(th) * e2[d];
        append_direction(fan, space, x, Point::coords(hyperbolic_exp(c, u, 1.0)),
                         "angle" + std::to_string(i));
      }
      break;
    }
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree: {
      const TreeGraph& g = space.tree();
      const Point xn = normalize_point(space, x);
      const auto& t = xn.as_tree();
      std::vector<std::pair<Point, std::string>> candidates;
      if (t.on_vertex()) {
        for (const auto& [e, w] : g.incident(t.vertex)) {
          const auto& edge = g.edge(e);
          const double reach = std::min(1.0, edge.length);
          const double off = edge.u == t.vertex ? reach : edge.length - reach;
          candidates.emplace_back(
              normalize_point(space, Point::tree_edge(e, off)),
              "edge" + std::to_string(e) + "->" + g.vertex_name(w));
        }
      } else {
        const auto& edge = g.edge(t.edge);
        const double down = std::min(1.0, t.offset);
        const double up = std::min(1.0, edge.length - t.offset);
        candidates.emplace_back(
            normalize_point(space, Point::tree_edge(t.edge, t.offset - down)),
            "edge" + std::to_string(t.edge) + "->" + g.vertex_name(edge.u));
        candidates.emplace_back(
            normalize_point(space, Point::tree_edge(t.edge, t.offset + up)),
            "edge" + std::to_string(t.edge) + "->" + g.vertex_name(edge.v));
      }
      fan.truncated = static_cast<int>(candidates.size()) != k;
      if (static_cast<int>(candidates.size()) > k) candidates.resize(k);
      for (auto& [end, label] : candidates)
        append_direction(fan, space, xn, end, label);
      fan.base = xn;
      break;
    }
    case SpaceKind::product: {
      // Pairwise combinations of component fans (including one trivial side),
      // capped at unit length, first k kept.
      const int side = std::max(1, (k + 1) / 2);
      const DirectionFan fl = direction_fan(space.left(), x.left(), side, seed);
      const DirectionFan fr =
          direction_fan(space.right(), x.right(), side, seed + 1);
      std::vector<std::pair<Point, std::string>> candidates;
      for (size_t i = 0; i < fl.geodesics.size(); ++i)
        candidates.emplace_back(
            Point::pair(fl.geodesics[i].end, x.right()),
            "L:" + fl.labels[i]);
      for (size_t j = 0; j < fr.geodesics.size(); ++j)
        candidates.emplace_back(
            Point::pair(x.left(), fr.geodesics[j].end),
            "R:" + fr.labels[j]);
      for (size_t i = 0; i < fl.geodesics.size(); ++i)
        for (size_t j = 0; j < fr.geodesics.size(); ++j)
          candidates.emplace_back(
              Point::pair(fl.geodesics[i].end, fr.geodesics[j].end),
              "L:" + fl.labels[i] + "|R:" + fr.labels[j]);
      if (static_cast<int>(candidates.size()) > k) candidates.resize(k);
      fan.truncated = static_cast<int>(candidates.size()) < k;
      for (auto& [end, label] : candidates) {
        Geodesic g = geodesic(space, x, end);
        if (g.length <= 1e-12) continue;
        if (g.length > 1.0) {
          // cap at unit length
          const Point capped = combine(space, x, end, 1.0 / g.length);
          g = geodesic(space, x, capped);
        }
        fan.geodesics.push_back(g);
        fan.labels.push_back(label);
      }
      break;
    }
  }
  if (fan.geodesics.empty())
    throw DomainError("no admissible directions from the given point");
  return fan;
}

Point step_along(const Space& space, const Point& x, const Geodesic& g,
                 double s, bool* clamped) {
  if (clamped) *clamped = false;
  if (g.length <= 1e-12) {
    if (clamped) *clamped = true;
    return x;
  }
  if (s <= g.length)
    return combine(space, x, g.end, s / g.length);

  switch (space.kind()) {
    case SpaceKind::euclidean: {
      const auto& a = x.as_coords();
      const auto& b = g.end.as_coords();
      const double f = s / g.length;
      Point::Coords c(a.size());
      for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + f * (b[i] - a[i]);
      return Point::coords(std::move(c));
    }
    case SpaceKind::hyperbolic2: {
      const auto& a = x.as_coords();
      const auto& b = g.end.as_coords();
      // Recover the unit tangent and exponentiate to the longer arclength.
      const double d = g.length;
      Point::Coords u(3);
      const double ch = std::cosh(d), sh = std::sinh(d);
      for (int i = 0; i < 3; ++i) u[i] = (b[i] - ch * a[i]) / sh;
      return Point::coords(hyperbolic_exp(a, u, s));
    }
    case SpaceKind::two_quadrant: {
      const auto& a = x.as_coords();
      const auto& b = g.end.as_coords();
      const double ux = (b[0] - a[0]) / g.length;
      const double uy = (b[1] - a[1]) / g.length;
      // Extension is only well defined along a straight segment inside one
      // square; stop at the boundary.
      const bool positive = !(a[0] < 0.0 || a[1] < 0.0 || b[0] < 0.0 || b[1] < 0.0);
      const double lo = positive ? 0.0 : -1.0;
      const double hi = positive ? 1.0 : 0.0;
      const double reach = box_reach(a, ux, uy, lo, hi);
      const double step = std::min(s, reach);
      if (clamped && step < s) *clamped = true;
      return normalize_point(
          space, Point::coords({a[0] + step * ux, a[1] + step * uy}));
    }
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree:
      if (clamped) *clamped = true;
      return g.end;  // continuing past a vertex is ambiguous
    case SpaceKind::product: {
      // Scale both components by the same factor; each clamps on its own.
      const double f = s / g.length;
      bool cl = false, cr = false;
      const Geodesic gl = geodesic(space.left(), x.left(), g.end.left());
      const Geodesic gr = geodesic(space.right(), x.right(), g.end.right());
      const Point pl = step_along(space.left(), x.left(), gl, f * gl.length, &cl);
      const Point pr =
          step_along(space.right(), x.right(), gr, f * gr.length, &cr);
      if (clamped) *clamped = cl || cr;
      return Point::pair(pl, pr);
    }
  }
  throw KindMismatchError("unhandled space kind");
}

}  // namespace hk
