#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "formplan/geometry.hpp"

namespace formplan {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

/// World description: a rectangular border and disjoint polygonal obstacles.
struct PolygonMap {
  std::string name;
  Rect border;
  std::vector<Polygon> obstacles;

  /// Distance from `p` to the nearest obstacle edge or border side. Zero for
  /// points inside an obstacle or outside the border.
  double clearance(Point p) const;

  /// Strictly inside the border and not inside (or on) any obstacle.
  bool in_free_space(Point p) const;

  /// True when [a,b] touches any obstacle edge or leaves the border.
  bool segment_hits_obstacle(Point a, Point b) const;

  double free_area() const;
};

/// Throws ValidationError naming the offending polygon index when an
/// invariant is broken: non-positive border, fewer than three vertices,
/// self-intersection, zero area or collinear consecutive vertices, an
/// obstacle leaving the border, or two obstacles overlapping/touching.
void validate(const PolygonMap& map);

/// c_r for r = 1..R, stored at index r-1. Empty until costs are evaluated.
using CostVector = std::vector<double>;

struct Vertex {
  VertexId id = 0;
  Point pos;
  double clearance = 0.0;
};

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
  double clearance = 0.0;
  bool is_virtual = false;
  CostVector costs;

  VertexId other(VertexId w) const { return w == u ? v : u; }
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// Undirected simple graph with dense ids: vertex i is vertices()[i] and
/// edge j is edges()[j]. Immutable once built; every transformation returns
/// a new Roadmap.
class Roadmap {
 public:
  Roadmap() = default;

  /// Validates ids, endpoints, simplicity (no self-loops or parallel edges)
  /// and virtual-edge rules, then builds the adjacency index.
  Roadmap(std::vector<Vertex> vertices, std::vector<Edge> edges);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  const Vertex& vertex(VertexId v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool contains(VertexId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < vertices_.size();
  }

  /// Incident edges of `v`, sorted by neighbour id.
  std::span<const Incidence> neighbors(VertexId v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }
  int degree(VertexId v) const { return static_cast<int>(neighbors(v).size()); }
  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  /// Smallest cost-vector length over non-virtual edges; 0 if costs were
  /// never evaluated or the graph has no edges.
  int cost_capacity() const;

  bool is_connected() const;

  friend bool operator==(const Roadmap& a, const Roadmap& b);

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
};

/// Incremental construction helper that assigns dense ids.
class RoadmapBuilder {
 public:
  VertexId add_vertex(Point pos, double clearance);
  EdgeId add_edge(VertexId u, VertexId v, double length, double clearance,
                  bool is_virtual = false, CostVector costs = {});
  std::size_t vertex_count() const { return vertices_.size(); }
  const Vertex& vertex(VertexId v) const { return vertices_[static_cast<std::size_t>(v)]; }
  Roadmap build() &&;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

/// Start/goal query for a formation of `robots` robots.
struct PlanQuery {
  VertexId start = 0;
  VertexId goal = 0;
  int robots = 1;
  double coefficient = 0.0;  // formation control coefficient k
};

void validate(const PlanQuery& query, const Roadmap& roadmap);

/// Smallest-id vertex located exactly at `p`, if any.
std::optional<VertexId> vertex_at(const Roadmap& roadmap, Point p);

}  // namespace formplan
