#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "hadamardkit/errors.hpp"

namespace hk {

/// A finite weighted tree: the underlying graph of the metric-tree spaces.
/// Vertices are named; edges carry strictly positive lengths. Construction
/// rejects anything that is not a connected acyclic graph.
class TreeGraph {
 public:
  struct Edge {
    int u;
    int v;
    double length;
  };

  TreeGraph(std::vector<std::string> vertex_names,
            std::vector<std::tuple<std::string, std::string, double>> edges);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& vertex_name(int v) const { return names_[v]; }
  int vertex_index(std::string_view name) const;  // -1 when absent
  const Edge& edge(int e) const { return edges_[e]; }

  // (edge index, neighbour vertex) pairs incident to v.
  const std::vector<std::pair<int, int>>& incident(int v) const {
    return adjacency_[v];
  }

  double vertex_distance(int a, int b) const { return dist_[a][b]; }

  // The unique vertex path a -> b, inclusive of both ends.
  std::vector<int> vertex_path(int a, int b) const;

  double total_length() const { return total_length_; }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<std::vector<double>> dist_;
  double total_length_ = 0.0;
};

enum class SpaceKind {
  euclidean,
  metric_tree,
  monod_tree,
  product,
  two_quadrant,
  hyperbolic2,
};

std::string_view space_kind_name(SpaceKind kind);

/// Descriptor of one of the model Hadamard spaces. Cheap to copy; all
/// internals are shared and immutable, so concurrent read-only use is safe.
class Space {
 public:
  static Space euclidean(int dim);
  static Space metric_tree(TreeGraph graph);
  /// Star tree with hub "o" and rays "r1".."rN"; ray k is a single edge of
  /// length k.
  static Space monod_tree(int num_rays);
  static Space product(Space left, Space right);
  static Space two_quadrant();
  static Space hyperbolic2();

  SpaceKind kind() const { return kind_; }
  bool is_tree() const {
    return kind_ == SpaceKind::metric_tree || kind_ == SpaceKind::monod_tree;
  }

  int dim() const;  // coordinate dimension of the payload for this kind
  const TreeGraph& tree() const;
  int num_rays() const;
  const Space& left() const;
  const Space& right() const;

  bool same_as(const Space& other) const;

 private:
  Space() = default;

  SpaceKind kind_ = SpaceKind::euclidean;
  int dim_ = 0;
  int num_rays_ = 0;
  std::shared_ptr<const TreeGraph> tree_;
  std::shared_ptr<const Space> left_;
  std::shared_ptr<const Space> right_;
};

/// Location in a space. The payload must match the space kind:
/// coordinate vector (euclidean / two_quadrant / hyperbolic2), a tree
/// position (vertex, or edge + offset), or a pair of component points
/// (product spaces).
class Point {
 public:
  using Coords = std::vector<double>;

  struct TreePos {
    int vertex = -1;          // >= 0 when the point sits on a vertex
    int edge = -1;            // >= 0 when the point sits inside an edge
    double offset = 0.0;      // distance from edge endpoint u
    bool on_vertex() const { return vertex >= 0; }
  };

  Point() : rep_(Coords{}) {}

  static Point coords(Coords c) { return Point(std::move(c)); }
  static Point coords(std::initializer_list<double> c) {
    return Point(Coords(c));
  }
  static Point tree_vertex(int v);
  static Point tree_edge(int e, double offset);
  static Point pair(Point left, Point right);

  bool is_coords() const { return std::holds_alternative<Coords>(rep_); }
  bool is_tree() const { return std::holds_alternative<TreePos>(rep_); }
  bool is_pair() const {
    return std::holds_alternative<std::vector<Point>>(rep_);
  }

  const Coords& as_coords() const;
  const TreePos& as_tree() const;
  const Point& left() const;
  const Point& right() const;

 private:
  explicit Point(Coords c) : rep_(std::move(c)) {}
  explicit Point(TreePos t) : rep_(t) {}
  explicit Point(std::vector<Point> parts) : rep_(std::move(parts)) {}

  std::variant<Coords, TreePos, std::vector<Point>> rep_;
};

bool point_valid(const Space& space, const Point& p, double tol = 1e-9);
void check_point(const Space& space, const Point& p, double tol = 1e-9);

/// Canonical form of a point: tree offsets snapped to vertices, two-quadrant
/// coordinates clamped onto the squares, hyperboloid coordinates renormalized.
/// Inputs must already be valid up to roughly the snapping tolerance.
Point normalize_point(const Space& space, Point p);

}  // namespace hk
