#include "formplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

template <typename Fn>
void for_each_obstacle_edge(const std::vector<Polygon>& obstacles, Fn&& fn) {
  for (const Polygon& poly : obstacles) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) fn(poly[i], poly[(i + 1) % n]);
  }
}

}  // namespace

double PolygonMap::clearance(Point p) const {
  if (p.x <= border.xmin || p.x >= border.xmax || p.y <= border.ymin || p.y >= border.ymax) {
    return 0.0;
  }
  for (const Polygon& poly : obstacles) {
    if (point_in_polygon(p, poly)) return 0.0;
  }
  double best = std::min({p.x - border.xmin, border.xmax - p.x, p.y - border.ymin, border.ymax - p.y});
  for_each_obstacle_edge(obstacles, [&](Point a, Point b) {
    best = std::min(best, distance_to_segment(p, a, b));
  });
  return best;
}

bool PolygonMap::in_free_space(Point p) const { return clearance(p) > 0.0; }

bool PolygonMap::segment_hits_obstacle(Point a, Point b) const {
  if (!border.contains(a) || !border.contains(b)) return true;
  bool hit = false;
  for_each_obstacle_edge(obstacles, [&](Point c, Point d) {
    if (!hit && segments_intersect(a, b, c, d)) hit = true;
  });
  if (hit) return true;
  // Fully inside an obstacle without touching its boundary.
  for (const Polygon& poly : obstacles) {
    if (point_in_polygon(a, poly)) return true;
  }
  return false;
}

double PolygonMap::free_area() const {
  double area = border.width() * border.height();
  for (const Polygon& poly : obstacles) area -= std::abs(signed_area(poly));
  return area;
}

void validate(const PolygonMap& map) {
  if (!(map.border.width() > 0.0) || !(map.border.height() > 0.0)) {
    throw ValidationError("border must have positive width and height");
  }
  for (std::size_t i = 0; i < map.obstacles.size(); ++i) {
    const Polygon& poly = map.obstacles[i];
    const int idx = static_cast<int>(i);
    const std::string tag = "obstacle polygon " + std::to_string(i);
    if (poly.size() < 3) throw ValidationError(tag + " has fewer than 3 vertices", idx);
    for (const Point& p : poly) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ValidationError(tag + " has a non-finite coordinate", idx);
      }
      if (!map.border.contains(p)) throw ValidationError(tag + " lies outside the border", idx);
    }
    if (!is_simple_polygon(poly)) throw ValidationError(tag + " is self-intersecting", idx);
    if (signed_area(poly) == 0.0) throw ValidationError(tag + " has zero area", idx);
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (orient(poly[k], poly[(k + 1) % n], poly[(k + 2) % n]) == 0.0) {
        throw ValidationError(tag + " has collinear consecutive vertices", idx);
      }
    }
  }
  for (std::size_t i = 0; i < map.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < map.obstacles.size(); ++j) {
      const Polygon& a = map.obstacles[i];
      const Polygon& b = map.obstacles[j];
      bool overlap = point_in_polygon(a.front(), b) || point_in_polygon(b.front(), a);
      for (std::size_t s = 0; s < a.size() && !overlap; ++s) {
        for (std::size_t t = 0; t < b.size() && !overlap; ++t) {
          overlap = segments_intersect(a[s], a[(s + 1) % a.size()], b[t], b[(t + 1) % b.size()]);
        }
      }
      if (overlap) {
        throw ValidationError("obstacle polygon " + std::to_string(j) + " overlaps polygon " +
                                  std::to_string(i),
                              static_cast<int>(j));
      }
    }
  }
}

Roadmap::Roadmap(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const auto nv = static_cast<VertexId>(vertices_.size());
  for (VertexId i = 0; i < nv; ++i) {
    if (vertices_[static_cast<std::size_t>(i)].id != i) {
      throw ValidationError("vertex ids must be dense: expected " + std::to_string(i) + ", got " +
                            std::to_string(vertices_[static_cast<std::size_t>(i)].id));
    }
  }
  adjacency_.assign(vertices_.size(), {});
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    const int idx = static_cast<int>(j);
    const std::string tag = "edge " + std::to_string(j);
    if (e.id != static_cast<EdgeId>(j)) {
      throw ValidationError("edge ids must be dense: expected " + std::to_string(j) + ", got " +
                                std::to_string(e.id),
                            idx);
    }
    for (VertexId end : {e.u, e.v}) {
      if (end < 0 || end >= nv) {
        throw ValidationError(tag + " references missing vertex " + std::to_string(end), idx);
      }
    }
    if (e.u == e.v) throw ValidationError(tag + " is a self-loop", idx);
    if (e.is_virtual) {
      if (e.length != 0.0) throw ValidationError(tag + " is virtual but has nonzero length", idx);
      for (double c : e.costs) {
        if (c != 0.0) throw ValidationError(tag + " is virtual but has nonzero cost", idx);
      }
    }
    for (double c : e.costs) {
      if (!std::isfinite(c) || c < 0.0) {
        throw ValidationError(tag + " has a negative or non-finite cost", idx);
      }
    }
    adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.id});
    adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, e.id});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (list[k].neighbor == list[k - 1].neighbor) {
        throw ValidationError("edges " + std::to_string(list[k - 1].edge) + " and " +
                                  std::to_string(list[k].edge) + " are parallel",
                              list[k].edge);
      }
    }
  }
}

std::optional<EdgeId> Roadmap::find_edge(VertexId a, VertexId b) const {
  if (!contains(a) || !contains(b)) return std::nullopt;
  auto list = neighbors(a);
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const Incidence& inc, VertexId key) { return inc.neighbor < key; });
  if (it != list.end() && it->neighbor == b) return it->edge;
  return std::nullopt;
}

int Roadmap::cost_capacity() const {
  int capacity = std::numeric_limits<int>::max();
  bool any = false;
  for (const Edge& e : edges_) {
    if (e.is_virtual) continue;
    capacity = std::min(capacity, static_cast<int>(e.costs.size()));
    any = true;
  }
  return any ? capacity : 0;
}

bool Roadmap::is_connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (const Incidence& inc : neighbors(u)) {
      auto& flag = seen[static_cast<std::size_t>(inc.neighbor)];
      if (!flag) {
        flag = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return reached == vertices_.size();
}

bool operator==(const Roadmap& a, const Roadmap& b) {
  if (a.vertices_.size() != b.vertices_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.vertices_.size(); ++i) {
    const Vertex& x = a.vertices_[i];
    const Vertex& y = b.vertices_[i];
    if (x.id != y.id || !(x.pos == y.pos) || x.clearance != y.clearance) return false;
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.id != y.id || x.u != y.u || x.v != y.v || x.length != y.length ||
        x.clearance != y.clearance || x.is_virtual != y.is_virtual || x.costs != y.costs) {
      return false;
    }
  }
  return true;
}

VertexId RoadmapBuilder::add_vertex(Point pos, double clearance) {
  const auto id = static_cast<VertexId>(vertices_.size());
  vertices_.push_back({id, pos, clearance});
  return id;
}

EdgeId RoadmapBuilder::add_edge(VertexId u, VertexId v, double length, double clearance,
                                bool is_virtual, CostVector costs) {
  const auto id = static_cast<EdgeId>(edges_.size());
  edges_.push_back({id, u, v, length, clearance, is_virtual, std::move(costs)});
  return id;
}

Roadmap RoadmapBuilder::build() && { return Roadmap(std::move(vertices_), std::move(edges_)); }

void validate(const PlanQuery& query, const Roadmap& roadmap) {
  if (!roadmap.contains(query.start)) {
    throw ValidationError("start vertex " + std::to_string(query.start) + " does not exist");
  }
  if (!roadmap.contains(query.goal)) {
    throw ValidationError("goal vertex " + std::to_string(query.goal) + " does not exist");
  }
  if (query.start == query.goal) throw ValidationError("start and goal must differ");
  if (query.robots < 1) throw ValidationError("robot count must be at least 1");
  if (!(query.coefficient >= 0.0)) {
    throw ValidationError("formation control coefficient must be nonnegative");
  }
}

std::optional<VertexId> vertex_at(const Roadmap& roadmap, Point p) {
  for (const Vertex& v : roadmap.vertices()) {
    if (v.pos == p) return v.id;
  }
  return std::nullopt;
}

}  // namespace formplan
