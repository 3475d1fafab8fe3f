#include "hadamardkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace hk {

namespace {

constexpr double kSnapTol = 1e-12;

double sq(double x) { return x * x; }

}  // namespace

TreeGraph::TreeGraph(
    std::vector<std::string> vertex_names,
    std::vector<std::tuple<std::string, std::string, double>> edges)
    : names_(std::move(vertex_names)) {
  const int n = static_cast<int>(names_.size());
  if (n == 0) throw ConstructionError("tree must have at least one vertex");

  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second)
      throw ConstructionError("duplicate vertex name '" + name + "'");
  }

  if (static_cast<int>(edges.size()) != n - 1) {
    std::ostringstream msg;
    msg << "tree with " << n << " vertices must have exactly " << n - 1
        << " edges, got " << edges.size();
    throw ConstructionError(msg.str());
  }

  adjacency_.resize(n);
  std::set<std::pair<int, int>> edge_keys;
  for (const auto& [uname, vname, length] : edges) {
    const int u = vertex_index(uname);
    const int v = vertex_index(vname);
    if (u < 0 || v < 0)
      throw ConstructionError("edge references unknown vertex '" +
                              (u < 0 ? uname : vname) + "'");
    if (u == v)
      throw ConstructionError("self-loop at vertex '" + uname + "'");
    if (!(length > 0.0) || !std::isfinite(length))
      throw ConstructionError("edge '" + uname + "'-'" + vname +
                              "' must have positive finite length");
    if (!edge_keys.insert({std::min(u, v), std::max(u, v)}).second)
      throw ConstructionError("duplicate edge '" + uname + "'-'" + vname + "'");
    const int e = static_cast<int>(edges_.size());
    edges_.push_back({u, v, length});
    adjacency_[u].push_back({e, v});
    adjacency_[v].push_back({e, u});
    total_length_ += length;
  }

  // Connectivity; with |E| = |V|-1 this also rules out cycles.
  std::vector<char> visited(n, 0);
  std::deque<int> queue{0};
  visited[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [e, w] : adjacency_[v]) {
      (void)e;
      if (!visited[w]) {
        visited[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  if (reached != n) throw ConstructionError("tree graph is not connected");

  // All-pairs vertex distances via one BFS per vertex.
  dist_.assign(n, std::vector<double>(n, 0.0));
  for (int root = 0; root < n; ++root) {
    std::vector<char> done(n, 0);
    std::deque<int> bfs{root};
    done[root] = 1;
    while (!bfs.empty()) {
      const int v = bfs.front();
      bfs.pop_front();
      for (const auto& [e, w] : adjacency_[v]) {
        if (!done[w]) {
          done[w] = 1;
          dist_[root][w] = dist_[root][v] + edges_[e].length;
          bfs.push_back(w);
        }
      }
    }
  }
}

int TreeGraph::vertex_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i)
    if (names_[i] == name) return i;
  return -1;
}

std::vector<int> TreeGraph::vertex_path(int a, int b) const {
  const int n = vertex_count();
  std::vector<int> parent(n, -1);
  std::vector<char> visited(n, 0);
  std::deque<int> queue{a};
  visited[a] = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == b) break;
    for (const auto& [e, w] : adjacency_[v]) {
      (void)e;
      if (!visited[w]) {
        visited[w] = 1;
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> path;
  for (int v = b; v != -1; v = parent[v]) {
    path.push_back(v);
    if (v == a) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::string_view space_kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::metric_tree: return "metric_tree";
    case SpaceKind::monod_tree: return "monod_tree";
    case SpaceKind::product: return "product";
    case SpaceKind::two_quadrant: return "two_quadrant";
    case SpaceKind::hyperbolic2: return "hyperbolic2";
  }
  return "unknown";
}

Space Space::euclidean(int dim) {
  if (dim < 1) throw ConstructionError("euclidean dimension must be >= 1");
  Space s;
  s.kind_ = SpaceKind::euclidean;
  s.dim_ = dim;
  return s;
}

Space Space::metric_tree(TreeGraph graph) {
  Space s;
  s.kind_ = SpaceKind::metric_tree;
  s.tree_ = std::make_shared<TreeGraph>(std::move(graph));
  return s;
}

Space Space::monod_tree(int num_rays) {
  if (num_rays < 1) throw ConstructionError("monod_tree needs num_rays >= 1");
  std::vector<std::string> names{"o"};
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (int k = 1; k <= num_rays; ++k) {
    names.push_back("r" + std::to_string(k));
    edges.emplace_back("o", names.back(), static_cast<double>(k));
  }
  Space s;
  s.kind_ = SpaceKind::monod_tree;
  s.num_rays_ = num_rays;
  s.tree_ = std::make_shared<TreeGraph>(std::move(names), std::move(edges));
  return s;
}

Space Space::product(Space left, Space right) {
  Space s;
  s.kind_ = SpaceKind::product;
  s.left_ = std::make_shared<Space>(std::move(left));
  s.right_ = std::make_shared<Space>(std::move(right));
  return s;
}

Space Space::two_quadrant() {
  Space s;
  s.kind_ = SpaceKind::two_quadrant;
  s.dim_ = 2;
  return s;
}

Space Space::hyperbolic2() {
  Space s;
  s.kind_ = SpaceKind::hyperbolic2;
  s.dim_ = 3;
  return s;
}

int Space::dim() const {
  switch (kind_) {
    case SpaceKind::euclidean: return dim_;
    case SpaceKind::two_quadrant: return 2;
    case SpaceKind::hyperbolic2: return 3;
    default:
      throw KindMismatchError("space kind has no coordinate dimension");
  }
}

const TreeGraph& Space::tree() const {
  if (!tree_) throw KindMismatchError("space is not a tree");
  return *tree_;
}

int Space::num_rays() const {
  if (kind_ != SpaceKind::monod_tree)
    throw KindMismatchError("space is not a monod_tree");
  return num_rays_;
}

const Space& Space::left() const {
  if (!left_) throw KindMismatchError("space is not a product");
  return *left_;
}

const Space& Space::right() const {
  if (!right_) throw KindMismatchError("space is not a product");
  return *right_;
}

bool Space::same_as(const Space& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case SpaceKind::euclidean: return dim_ == other.dim_;
    case SpaceKind::two_quadrant:
    case SpaceKind::hyperbolic2: return true;
    case SpaceKind::monod_tree: return num_rays_ == other.num_rays_;
    case SpaceKind::product:
      return left_->same_as(*other.left_) && right_->same_as(*other.right_);
    case SpaceKind::metric_tree: {
      const TreeGraph& a = *tree_;
      const TreeGraph& b = *other.tree_;
      if (a.vertex_count() != b.vertex_count() ||
          a.edge_count() != b.edge_count())
        return false;
      for (int v = 0; v < a.vertex_count(); ++v)
        if (a.vertex_name(v) != b.vertex_name(v)) return false;
      for (int e = 0; e < a.edge_count(); ++e) {
        if (a.edge(e).u != b.edge(e).u || a.edge(e).v != b.edge(e).v ||
            a.edge(e).length != b.edge(e).length)
          return false;
      }
      return true;
    }
  }
  return false;
}

Point Point::tree_vertex(int v) {
  if (v < 0) throw DomainError("negative vertex index");
  TreePos t;
  t.vertex = v;
  return Point(t);
}

Point Point::tree_edge(int e, double offset) {
  if (e < 0) throw DomainError("negative edge index");
  TreePos t;
  t.edge = e;
  t.offset = offset;
  return Point(t);
}

Point Point::pair(Point left, Point right) {
  std::vector<Point> parts;
  parts.reserve(2);
  parts.push_back(std::move(left));
  parts.push_back(std::move(right));
  return Point(std::move(parts));
}

const Point::Coords& Point::as_coords() const {
  if (!is_coords()) throw KindMismatchError("point payload is not coordinates");
  return std::get<Coords>(rep_);
}

const Point::TreePos& Point::as_tree() const {
  if (!is_tree()) throw KindMismatchError("point payload is not a tree position");
  return std::get<TreePos>(rep_);
}

const Point& Point::left() const {
  if (!is_pair()) throw KindMismatchError("point payload is not a pair");
  return std::get<std::vector<Point>>(rep_)[0];
}

const Point& Point::right() const {
  if (!is_pair()) throw KindMismatchError("point payload is not a pair");
  return std::get<std::vector<Point>>(rep_)[1];
}

namespace {

bool in_positive_square(const Point::Coords& c, double tol) {
  return c[0] >= -tol && c[0] <= 1.0 + tol && c[1] >= -tol && c[1] <= 1.0 + tol;
}

bool in_negative_square(const Point::Coords& c, double tol) {
  return c[0] <= tol && c[0] >= -1.0 - tol && c[1] <= tol && c[1] >= -1.0 - tol;
}

}  // namespace

bool point_valid(const Space& space, const Point& p, double tol) {
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      if (!p.is_coords()) return false;
      const auto& c = p.as_coords();
      if (static_cast<int>(c.size()) != space.dim()) return false;
      for (double x : c)
        if (!std::isfinite(x)) return false;
      return true;
    }
    case SpaceKind::two_quadrant: {
      if (!p.is_coords()) return false;
      const auto& c = p.as_coords();
      if (c.size() != 2 || !std::isfinite(c[0]) || !std::isfinite(c[1]))
        return false;
      return in_positive_square(c, tol) || in_negative_square(c, tol);
    }
    case SpaceKind::hyperbolic2: {
      if (!p.is_coords()) return false;
      const auto& c = p.as_coords();
      if (c.size() != 3) return false;
      for (double x : c)
        if (!std::isfinite(x)) return false;
      const double q = sq(c[0]) - sq(c[1]) - sq(c[2]);
      return c[0] > 0.0 && std::abs(q - 1.0) <= tol;
    }
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree: {
      if (!p.is_tree()) return false;
      const auto& t = p.as_tree();
      const TreeGraph& g = space.tree();
      if (t.on_vertex()) return t.vertex < g.vertex_count();
      if (t.edge < 0 || t.edge >= g.edge_count()) return false;
      const double len = g.edge(t.edge).length;
      return std::isfinite(t.offset) && t.offset >= -tol &&
             t.offset <= len + tol;
    }
    case SpaceKind::product: {
      if (!p.is_pair()) return false;
      return point_valid(space.left(), p.left(), tol) &&
             point_valid(space.right(), p.right(), tol);
    }
  }
  return false;
}

void check_point(const Space& space, const Point& p, double tol) {
  if (!point_valid(space, p, tol)) {
    throw KindMismatchError(std::string("point is not valid for space kind '") +
                            std::string(space_kind_name(space.kind())) + "'");
  }
}

Point normalize_point(const Space& space, Point p) {
  switch (space.kind()) {
    case SpaceKind::euclidean:
      return p;
    case SpaceKind::two_quadrant: {
      auto c = p.as_coords();
      // Snap onto the nearer of the two squares.
      const double px = std::clamp(c[0], 0.0, 1.0);
      const double py = std::clamp(c[1], 0.0, 1.0);
      const double nx = std::clamp(c[0], -1.0, 0.0);
      const double ny = std::clamp(c[1], -1.0, 0.0);
      const double dp = sq(c[0] - px) + sq(c[1] - py);
      const double dn = sq(c[0] - nx) + sq(c[1] - ny);
      if (dp <= dn)
        c = {px, py};
      else
        c = {nx, ny};
      return Point::coords(std::move(c));
    }
    case SpaceKind::hyperbolic2: {
      auto c = p.as_coords();
      const double q = sq(c[0]) - sq(c[1]) - sq(c[2]);
      if (q > 0.0) {
        const double r = 1.0 / std::sqrt(q);
        for (double& x : c) x *= r;
      }
      if (c[0] < 0.0)
        throw DomainError("hyperboloid point on the wrong sheet");
      return Point::coords(std::move(c));
    }
    case SpaceKind::metric_tree:
    case SpaceKind::monod_tree: {
      const auto& t = p.as_tree();
      if (t.on_vertex()) return p;
      const TreeGraph& g = space.tree();
      const auto& e = g.edge(t.edge);
      if (t.offset <= kSnapTol) return Point::tree_vertex(e.u);
      if (t.offset >= e.length - kSnapTol) return Point::tree_vertex(e.v);
      return p;
    }
    case SpaceKind::product:
      return Point::pair(normalize_point(space.left(), p.left()),
                         normalize_point(space.right(), p.right()));
  }
  return p;
}

}  // namespace hk
