#include "hadamardkit/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hk {

namespace {

constexpr double kEps = 1e-12;

double sq(double x) { return x * x; }

double euclidean_distance(const Point::Coords& a, const Point::Coords& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
  return std::sqrt(s);
}

Point::Coords lerp(const Point::Coords& a, const Point::Coords& b, double t) {
  Point::Coords out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
  return out;
}

double norm2d(const Point::Coords& c) { return std::hypot(c[0], c[1]); }

bool same_quadrant(const Point::Coords& a, const Point::Coords& b) {
  const bool a_pos = a[0] >= 0.0 && a[1] >= 0.0;
  const bool a_neg = a[0] <= 0.0 && a[1] <= 0.0;
  const bool b_pos = b[0] >= 0.0 && b[1] >= 0.0;
  const bool b_neg = b[0] <= 0.0 && b[1] <= 0.0;
  return (a_pos && b_pos) || (a_neg && b_neg);
}

double minkowski(const Point::Coords& a, const Point::Coords& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double hyperbolic_distance(const Point::Coords& a, const Point::Coords& b) {
  return std::acosh(std::max(1.0, -minkowski(a, b)));
}

Point::Coords hyperbolic_combine(const Point::Coords& x,
                                 const Point::Coords& y, double t) {
  const double d = hyperbolic_distance(x, y);
  if (d < 1e-14) return x;
  const double sh = std::sinh(d);
  const double ch = std::cosh(d);
  // Unit tangent at x pointing to y.
  Point::Coords u(3);
  for (int i = 0; i < 3; ++i) u[i] = (y[i] - ch * x[i]) / sh;
  const double s = t * d;
  Point::Coords out(3);
  const double cs = std::cosh(s), ss = std::sinh(s);
  for (int i = 0; i < 3; ++i) out[i] = cs * x[i] + ss * u[i];
  const double q = sq(out[0]) - sq(out[1]) - sq(out[2]);
  if (q > 0.0) {
    const double r = 1.0 / std::sqrt(q);
    for (double& v : out) v *= r;
  }
  return out;
}

// ---- tree helpers ------------------------------------------------------

struct TreeExit {
  int vertex;
  double cost;  // arclength from the point to that vertex
};

// The one or two vertices through which a path can leave the point.
std::array<TreeExit, 2> tree_exits(const TreeGraph& g, const Point::TreePos& t,
                                   int& count) {
  std::array<TreeExit, 2> out{};
  if (t.on_vertex()) {
    out[0] = {t.vertex, 0.0};
    count = 1;
  } else {
    const auto& e = g.edge(t.edge);
    out[0] = {e.u, t.offset};
    out[1] = {e.v, e.length - t.offset};
    count = 2;
  }
  return out;
}

double tree_distance(const TreeGraph& g, const Point::TreePos& a,
                     const Point::TreePos& b) {
  if (!a.on_vertex() && !b.on_vertex() && a.edge == b.edge)
    return std::abs(a.offset - b.offset);
  int na = 0, nb = 0;
  const auto ea = tree_exits(g, a, na);
  const auto eb = tree_exits(g, b, nb);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      best = std::min(best, ea[i].cost +
                                g.vertex_distance(ea[i].vertex, eb[j].vertex) +
                                eb[j].cost);
  return best;
}

// Walk arclength s from p toward q along the unique path.
Point tree_walk(const Space& space, const Point::TreePos& p,
                const Point::TreePos& q, double s) {
  const TreeGraph& g = space.tree();
  const double total = tree_distance(g, p, q);
  if (total <= kEps || s <= kEps) return normalize_point(space, [&] {
    return p.on_vertex() ? Point::tree_vertex(p.vertex)
                         : Point::tree_edge(p.edge, p.offset);
  }());
  s = std::min(s, total);

  if (!p.on_vertex() && !q.on_vertex() && p.edge == q.edge) {
    const double dir = q.offset > p.offset ? 1.0 : -1.0;
    return normalize_point(space, Point::tree_edge(p.edge, p.offset + dir * s));
  }

  // Choose the exit/entry vertices realizing the shortest route.
  int np = 0, nq = 0;
  const auto ep = tree_exits(g, p, np);
  const auto eq = tree_exits(g, q, nq);
  double best = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 0;
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j) {
      const double c = ep[i].cost +
                       g.vertex_distance(ep[i].vertex, eq[j].vertex) +
                       eq[j].cost;
      if (c < best - kEps) {
        best = c;
        bi = i;
        bj = j;
      }
    }
  const TreeExit exit = ep[bi];
  const TreeExit entry = eq[bj];

  if (!p.on_vertex() && s <= exit.cost + kEps) {
    const auto& e = g.edge(p.edge);
    const double dir = exit.vertex == e.u ? -1.0 : 1.0;
    return normalize_point(space, Point::tree_edge(p.edge, p.offset + dir * s));
  }
  s -= exit.cost;

  const auto path = g.vertex_path(exit.vertex, entry.vertex);
  int at = exit.vertex;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const int next = path[i + 1];
    // Locate the edge between at and next.
    int edge_idx = -1;
    for (const auto& [e, w] : g.incident(at))
      if (w == next) {
        edge_idx = e;
        break;
      }
    const auto& e = g.edge(edge_idx);
    if (s <= e.length + kEps) {
      const double off = at == e.u ? s : e.length - s;
      return normalize_point(space, Point::tree_edge(edge_idx, off));
    }
    s -= e.length;
    at = next;
  }

  // Remainder runs from the entry vertex into q's edge.
  if (q.on_vertex()) return Point::tree_vertex(q.vertex);
  const auto& e = g.edge(q.edge);
  const double off = entry.vertex == e.u ? s : e.length - s;
  return normalize_point(space, Point::tree_edge(q.edge, off));
}

}  // namespace

double distance(const Space& space, const Point& p, const Point& q) {
  check_point(space, p);
  check_point(space, q);
  switch (space.kind()) {
    case SpaceKind::euclidean:
      return euclidean_distance(p.as_coords(), q.as_coords());
    case SpaceKind::two_quadrant: {
      const auto& a = p.as_coords();
      const auto& b = q.as_coords();
      if (same_quadrant(a, b)) return euclidean_distance(a, b);
      return norm2d(a) + norm2d(b);
    }
    case SpaceKind::hyperbolic2:
      return hyperbolic_distance(p.as_coords(), q.as_coords());
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree:
      return tree_distance(space.tree(), p.as_tree(), q.as_tree());
    case SpaceKind::product: {
      const double dl = distance(space.left(), p.left(), q.left());
      const double dr = distance(space.right(), p.right(), q.right());
      return std::hypot(dl, dr);
    }
  }
  throw KindMismatchError("unhandled space kind");
}

Point combine(const Space& space, const Point& x, const Point& y, double t) {
  if (t < -kEps || t > 1.0 + kEps)
    throw DomainError("interpolation parameter t must lie in [0, 1]");
  t = std::clamp(t, 0.0, 1.0);
  check_point(space, x);
  check_point(space, y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  switch (space.kind()) {
    case SpaceKind::euclidean:
      return Point::coords(lerp(x.as_coords(), y.as_coords(), t));
    case SpaceKind::two_quadrant: {
      const auto& a = x.as_coords();
      const auto& b = y.as_coords();
      if (same_quadrant(a, b))
        return normalize_point(space, Point::coords(lerp(a, b, t)));
      const double ra = norm2d(a);
      const double rb = norm2d(b);
      const double s = t * (ra + rb);
      Point::Coords c(2);
      if (s <= ra) {
        const double f = 1.0 - s / ra;
        c = {a[0] * f, a[1] * f};
      } else {
        const double f = (s - ra) / rb;
        c = {b[0] * f, b[1] * f};
      }
      return normalize_point(space, Point::coords(std::move(c)));
    }
    case SpaceKind::hyperbolic2:
      return Point::coords(hyperbolic_combine(x.as_coords(), y.as_coords(), t));
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree: {
      const double d = tree_distance(space.tree(), x.as_tree(), y.as_tree());
      return tree_walk(space, x.as_tree(), y.as_tree(), t * d);
    }
    case SpaceKind::product:
      return Point::pair(combine(space.left(), x.left(), y.left(), t),
                         combine(space.right(), x.right(), y.right(), t));
  }
  throw KindMismatchError("unhandled space kind");
}

Geodesic geodesic(const Space& space, const Point& p, const Point& q) {
  return Geodesic{space, p, q, distance(space, p, q)};
}

Point Geodesic::at(double t) const {
  if (length == 0.0) {
    if (t < -kEps || t > 1.0 + kEps)
      throw DomainError("geodesic parameter t must lie in [0, 1]");
    return start;
  }
  return combine(space, start, end, t);
}

double comparison_angle(const Space& space, const Point& p, const Point& q,
                        const Point& r) {
  const double a = distance(space, p, q);
  const double b = distance(space, p, r);
  if (a <= kEps)
    throw DomainError("comparison angle undefined: q coincides with p");
  if (b <= kEps)
    throw DomainError("comparison angle undefined: r coincides with p");
  const double c = distance(space, q, r);
  const double cosine =
      std::clamp((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0);
  return std::acos(cosine);
}

std::vector<double> default_angle_schedule() {
  std::vector<double> s;
  s.reserve(20);
  for (int k = 1; k <= 20; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

AngleEstimate alexandrov_angle(const Space& space, const Geodesic& gamma,
                               const Geodesic& eta,
                               const std::vector<double>& schedule,
                               int tail_window) {
  if (distance(space, gamma.start, eta.start) > 1e-9)
    throw DomainError("alexandrov angle requires segments from the same point");
  if (gamma.length <= kEps || eta.length <= kEps)
    throw DomainError("alexandrov angle requires positive-length segments");
  if (schedule.empty()) throw DomainError("empty angle schedule");

  AngleEstimate est;
  const Point& p = gamma.start;
  for (double t : schedule) {
    // Skip scales so small that the comparison angle is numerically void.
    if (t * gamma.length <= kEps || t * eta.length <= kEps) continue;
    est.scales.push_back(t);
    est.samples.push_back(comparison_angle(space, p, gamma.at(t), eta.at(t)));
  }
  if (est.samples.empty())
    throw DomainError("angle schedule left no usable scales");

  const int n = static_cast<int>(est.samples.size());
  const int w = std::max(1, std::min(tail_window, n));
  double lo = est.samples[n - w], hi = est.samples[n - w];
  for (int i = n - w; i < n; ++i) {
    lo = std::min(lo, est.samples[i]);
    hi = std::max(hi, est.samples[i]);
  }
  est.value = hi;
  est.spread = hi - lo;
  return est;
}

double cat0_quadratic_residual(const Space& space, const Point& x,
                               const Point& y, const Point& z, double t) {
  if (t < 0.0 || t > 1.0)
    throw DomainError("interpolation parameter t must lie in [0, 1]");
  const Point xt = combine(space, x, y, t);
  const double dxz = distance(space, x, z);
  const double dyz = distance(space, y, z);
  const double dxy = distance(space, x, y);
  const double dxtz = distance(space, xt, z);
  return (1.0 - t) * dxz * dxz + t * dyz * dyz - t * (1.0 - t) * dxy * dxy -
         dxtz * dxtz;
}

double quasilinearization(const Space& space, const Point& x, const Point& z,
                          const Point& y, const Point& w) {
  const double dxy = distance(space, x, y);
  const double dzw = distance(space, z, w);
  const double dxw = distance(space, x, w);
  const double dzy = distance(space, z, y);
  return 0.5 * (dxy * dxy + dzw * dzw - dxw * dxw - dzy * dzy);
}

}  // namespace hk
