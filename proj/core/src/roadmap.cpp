#include "formplan/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "formplan/delaunay.hpp"
#include "formplan/errors.hpp"

namespace formplan {

namespace {

constexpr double kCoincident = 1e-9;

// Mutable view used while transforming a roadmap; finish() compacts ids
// while preserving relative order.
class GraphEditor {
 public:
  explicit GraphEditor(const Roadmap& roadmap)
      : vertices_(roadmap.vertices().begin(), roadmap.vertices().end()),
        edges_(roadmap.edges().begin(), roadmap.edges().end()),
        vertex_alive_(vertices_.size(), 1),
        edge_alive_(edges_.size(), 1),
        incident_(vertices_.size()),
        degree_(vertices_.size(), 0) {
    for (const Edge& e : edges_) attach(e);
  }

  std::size_t vertex_slots() const { return vertices_.size(); }
  std::size_t edge_slots() const { return edges_.size(); }
  bool vertex_alive(VertexId v) const { return vertex_alive_[idx(v)] != 0; }
  bool edge_alive(EdgeId e) const { return edge_alive_[idx(e)] != 0; }
  const Vertex& vertex(VertexId v) const { return vertices_[idx(v)]; }
  const Edge& edge(EdgeId e) const { return edges_[idx(e)]; }
  int degree(VertexId v) const { return degree_[idx(v)]; }

  std::vector<EdgeId> incident(VertexId v) const {
    std::vector<EdgeId> out;
    for (EdgeId e : incident_[idx(v)]) {
      if (edge_alive(e)) out.push_back(e);
    }
    return out;
  }

  bool has_edge(VertexId a, VertexId b) const {
    for (EdgeId e : incident_[idx(a)]) {
      if (edge_alive(e) && edge(e).other(a) == b) return true;
    }
    return false;
  }

  VertexId add_vertex(Point pos, double clearance) {
    const auto id = static_cast<VertexId>(vertices_.size());
    vertices_.push_back({id, pos, clearance});
    vertex_alive_.push_back(1);
    incident_.emplace_back();
    degree_.push_back(0);
    return id;
  }

  EdgeId add_edge(VertexId u, VertexId v, double length, double clearance, bool is_virtual,
                  CostVector costs) {
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({id, u, v, length, clearance, is_virtual, std::move(costs)});
    edge_alive_.push_back(1);
    attach(edges_.back());
    return id;
  }

  void remove_edge(EdgeId e) {
    if (!edge_alive(e)) return;
    edge_alive_[idx(e)] = 0;
    degree_[idx(edges_[idx(e)].u)] -= 1;
    degree_[idx(edges_[idx(e)].v)] -= 1;
  }

  void remove_vertex(VertexId v) {
    for (EdgeId e : incident(v)) remove_edge(e);
    vertex_alive_[idx(v)] = 0;
  }

  Roadmap finish() const {
    std::vector<VertexId> remap(vertices_.size(), -1);
    RoadmapBuilder builder;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertex_alive_[i]) remap[i] = builder.add_vertex(vertices_[i].pos, vertices_[i].clearance);
    }
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      if (!edge_alive_[j]) continue;
      const Edge& e = edges_[j];
      builder.add_edge(remap[idx(e.u)], remap[idx(e.v)], e.length, e.clearance, e.is_virtual,
                       e.costs);
    }
    return std::move(builder).build();
  }

 private:
  static std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }

  void attach(const Edge& e) {
    incident_[idx(e.u)].push_back(e.id);
    incident_[idx(e.v)].push_back(e.id);
    degree_[idx(e.u)] += 1;
    degree_[idx(e.v)] += 1;
  }

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<char> vertex_alive_;
  std::vector<char> edge_alive_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<int> degree_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_noise(std::uint64_t key) {
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

VertexId relocate(const Roadmap& roadmap, Point p) {
  const auto v = vertex_at(roadmap, p);
  if (!v) throw InternalError("terminal vertex lost during roadmap construction");
  return *v;
}

std::pair<Roadmap, VertexId> insert_terminal_impl(const Roadmap& roadmap, const PolygonMap* map,
                                                  Point point) {
  for (const Vertex& v : roadmap.vertices()) {
    if (distance(v.pos, point) <= kCoincident) return {roadmap, v.id};
  }
  double terminal_clearance = 0.0;
  if (map) {
    terminal_clearance = map->clearance(point);
    if (terminal_clearance <= 0.0) {
      throw ValidationError("terminal point (" + std::to_string(point.x) + ", " +
                            std::to_string(point.y) + ") is not in free space");
    }
  }

  std::optional<EdgeId> nearest;
  Projection best{};
  best.distance = std::numeric_limits<double>::infinity();
  for (const Edge& e : roadmap.edges()) {
    if (e.is_virtual) continue;
    const Projection pr =
        project_onto_segment(point, roadmap.vertex(e.u).pos, roadmap.vertex(e.v).pos);
    if (pr.distance < best.distance - 1e-12) {
      best = pr;
      nearest = e.id;
    }
  }
  if (!nearest) throw ConstructionError("roadmap has no edge to attach a terminal to");

  const Edge& host = roadmap.edge(*nearest);
  const Vertex& hu = roadmap.vertex(host.u);
  const Vertex& hv = roadmap.vertex(host.v);
  GraphEditor editor(roadmap);

  VertexId anchor;
  if (distance(best.point, hu.pos) <= kCoincident) {
    anchor = hu.id;
  } else if (distance(best.point, hv.pos) <= kCoincident) {
    anchor = hv.id;
  } else {
    const double split_clearance = map ? map->clearance(best.point) : host.clearance;
    anchor = editor.add_vertex(best.point, split_clearance);
    editor.remove_edge(host.id);
    editor.add_edge(host.u, anchor, distance(hu.pos, best.point), host.clearance, false, {});
    editor.add_edge(anchor, host.v, distance(best.point, hv.pos), host.clearance, false, {});
  }

  if (best.distance <= kCoincident) return {editor.finish(), anchor};

  const Point anchor_pos = editor.vertex(anchor).pos;
  double connector_clearance = host.clearance;
  if (map) {
    if (map->segment_hits_obstacle(point, anchor_pos)) {
      throw ConstructionError("terminal cannot reach the roadmap without crossing an obstacle");
    }
    connector_clearance = std::min({terminal_clearance, map->clearance(anchor_pos),
                                    map->clearance(midpoint(point, anchor_pos))});
  } else {
    terminal_clearance = host.clearance;
  }
  const VertexId terminal = editor.add_vertex(point, terminal_clearance);
  editor.add_edge(terminal, anchor, distance(point, anchor_pos), connector_clearance, false, {});
  return {editor.finish(), terminal};
}

}  // namespace

void validate(const RoadmapBuildParams& params) {
  if (!(params.sampling_step > 0.0)) throw ValidationError("sampling_step must be positive");
  if (!(params.min_clearance >= 0.0)) throw ValidationError("min_clearance must be nonnegative");
  if (!(params.clearance_weight >= 0.0)) throw ValidationError("clearance weight must be nonnegative");
  if (!(params.coefficient >= 0.0)) throw ValidationError("coefficient k must be nonnegative");
  if (params.robots < 1) throw ValidationError("robot count must be at least 1");
}

std::vector<Point> sample_boundaries(const PolygonMap& map, double step) {
  std::vector<Point> sites;
  auto sample_loop = [&](const std::vector<Point>& loop) {
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = loop[i];
      const Point b = loop[(i + 1) % n];
      const auto pieces = static_cast<int>(std::max(1.0, std::ceil(distance(a, b) / step)));
      for (int k = 0; k < pieces; ++k) sites.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
    }
  };
  sample_loop(map.border.corners());
  for (const Polygon& poly : map.obstacles) sample_loop(poly);
  return sites;
}

Roadmap build_skeleton(const PolygonMap& map, const RoadmapBuildParams& params) {
  validate(map);
  validate(params);
  if (map.free_area() <= 0.0) throw ConstructionError("map has no free space");

  std::vector<Point> sites = sample_boundaries(map, params.sampling_step);
  // Sampled boundaries are full of collinear and cocircular runs. A tiny
  // deterministic jitter makes the triangulation generic; clearances are
  // measured against the exact polygons afterwards.
  const double jitter = 1e-6 * params.sampling_step;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    sites[i].x += jitter * unit_noise(2 * i);
    sites[i].y += jitter * unit_noise(2 * i + 1);
  }
  const auto triangles = delaunay_triangulate(sites);
  const VoronoiDiagram voronoi = voronoi_dual(sites, triangles, 1e-3 * params.sampling_step);

  RoadmapBuilder builder;
  std::vector<VertexId> ids(voronoi.vertices.size(), -1);
  auto vertex_for = [&](int vi) {
    auto& id = ids[static_cast<std::size_t>(vi)];
    if (id < 0) {
      const Point p = voronoi.vertices[static_cast<std::size_t>(vi)];
      id = builder.add_vertex(p, map.clearance(p));
    }
    return id;
  };
  auto add_edge = [&](VertexId a, VertexId b) {
    const Point pa = builder.vertex(a).pos;
    const Point pb = builder.vertex(b).pos;
    const double length = distance(pa, pb);
    if (length <= 0.0) return;
    const double clearance = std::min(
        {builder.vertex(a).clearance, builder.vertex(b).clearance, map.clearance(midpoint(pa, pb))});
    builder.add_edge(a, b, length, clearance);
  };

  for (const auto& [ia, ib] : voronoi.edges) {
    const Point a = voronoi.vertices[static_cast<std::size_t>(ia)];
    const Point b = voronoi.vertices[static_cast<std::size_t>(ib)];
    const bool a_in = map.border.contains(a);
    const bool b_in = map.border.contains(b);
    if (a_in && b_in) {
      add_edge(vertex_for(ia), vertex_for(ib));
      continue;
    }
    const auto clipped = clip_segment(a, b, map.border);
    if (!clipped) continue;
    const VertexId va = a_in ? vertex_for(ia) : builder.add_vertex(clipped->first, map.clearance(clipped->first));
    const VertexId vb = b_in ? vertex_for(ib) : builder.add_vertex(clipped->second, map.clearance(clipped->second));
    add_edge(va, vb);
  }

  Roadmap skeleton = std::move(builder).build();
  const bool any_free = std::any_of(skeleton.vertices().begin(), skeleton.vertices().end(),
                                    [](const Vertex& v) { return v.clearance > 0.0; });
  if (!any_free) throw ConstructionError("skeleton has no vertex in free space");
  return skeleton;
}

Roadmap filter_edges(const Roadmap& roadmap, const PolygonMap& map, double min_clearance) {
  GraphEditor editor(roadmap);
  for (const Edge& e : roadmap.edges()) {
    if (e.is_virtual) continue;
    const Point a = roadmap.vertex(e.u).pos;
    const Point b = roadmap.vertex(e.v).pos;
    const bool narrow = e.clearance < min_clearance || e.clearance <= 0.0;
    if (narrow || !map.in_free_space(midpoint(a, b)) || map.segment_hits_obstacle(a, b)) {
      editor.remove_edge(e.id);
    }
  }
  bool any_edge = false;
  for (std::size_t v = 0; v < editor.vertex_slots(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (editor.degree(id) == 0) {
      editor.remove_vertex(id);
    } else {
      any_edge = true;
    }
  }
  if (!any_edge) throw ConstructionError("edge filtering left an empty graph");
  return editor.finish();
}

Roadmap keep_component(const Roadmap& roadmap, std::optional<VertexId> anchor) {
  const std::size_t n = roadmap.vertex_count();
  std::vector<int> label(n, -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int comp = static_cast<int>(sizes.size());
    std::size_t count = 0;
    std::vector<VertexId> stack{static_cast<VertexId>(s)};
    label[s] = comp;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      ++count;
      for (const Incidence& inc : roadmap.neighbors(u)) {
        auto& l = label[static_cast<std::size_t>(inc.neighbor)];
        if (l < 0) {
          l = comp;
          stack.push_back(inc.neighbor);
        }
      }
    }
    sizes.push_back(count);
  }
  if (sizes.empty()) return roadmap;
  int chosen = 0;
  if (anchor) {
    if (!roadmap.contains(*anchor)) throw ValidationError("anchor vertex does not exist");
    chosen = label[static_cast<std::size_t>(*anchor)];
  } else {
    // Components are labelled in order of their smallest vertex id, so a
    // strict comparison keeps the smallest id on ties.
    for (std::size_t c = 1; c < sizes.size(); ++c) {
      if (sizes[c] > sizes[static_cast<std::size_t>(chosen)]) chosen = static_cast<int>(c);
    }
  }
  GraphEditor editor(roadmap);
  for (std::size_t v = 0; v < n; ++v) {
    if (label[v] != chosen) editor.remove_vertex(static_cast<VertexId>(v));
  }
  return editor.finish();
}

Roadmap prune_tails(const Roadmap& roadmap, std::span<const VertexId> keep) {
  GraphEditor editor(roadmap);
  const std::set<VertexId> protected_ids(keep.begin(), keep.end());
  std::deque<VertexId> work;
  for (const Vertex& v : roadmap.vertices()) {
    if (editor.degree(v.id) <= 1 && !protected_ids.count(v.id)) work.push_back(v.id);
  }
  while (!work.empty()) {
    const VertexId v = work.front();
    work.pop_front();
    if (!editor.vertex_alive(v) || editor.degree(v) > 1) continue;
    std::vector<VertexId> touched;
    for (EdgeId e : editor.incident(v)) touched.push_back(editor.edge(e).other(v));
    editor.remove_vertex(v);
    for (VertexId w : touched) {
      if (editor.degree(w) <= 1 && !protected_ids.count(w)) work.push_back(w);
    }
  }
  return editor.finish();
}

Roadmap contract_chains(const Roadmap& roadmap, std::span<const VertexId> keep) {
  GraphEditor editor(roadmap);
  const std::set<VertexId> protected_ids(keep.begin(), keep.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t slot = 0; slot < editor.vertex_slots(); ++slot) {
      const auto v = static_cast<VertexId>(slot);
      if (!editor.vertex_alive(v) || editor.degree(v) != 2 || protected_ids.count(v)) continue;
      const auto inc = editor.incident(v);
      const Edge first = editor.edge(inc[0]);
      const Edge second = editor.edge(inc[1]);
      if (first.is_virtual || second.is_virtual) continue;
      const VertexId a = first.other(v);
      const VertexId b = second.other(v);
      if (a == b || editor.has_edge(a, b)) continue;
      CostVector costs;
      if (!first.costs.empty() && first.costs.size() == second.costs.size()) {
        costs.resize(first.costs.size());
        for (std::size_t r = 0; r < costs.size(); ++r) costs[r] = first.costs[r] + second.costs[r];
      }
      editor.remove_vertex(v);
      editor.add_edge(a, b, first.length + second.length,
                      std::min(first.clearance, second.clearance), false, std::move(costs));
      changed = true;
    }
  }
  return editor.finish();
}

std::pair<Roadmap, VertexId> insert_terminal(const Roadmap& roadmap, Point point) {
  return insert_terminal_impl(roadmap, nullptr, point);
}

std::pair<Roadmap, VertexId> insert_terminal(const Roadmap& roadmap, const PolygonMap& map,
                                             Point point) {
  return insert_terminal_impl(roadmap, &map, point);
}

Roadmap reduce_degree(const Roadmap& roadmap) {
  std::size_t capacity = 0;
  for (const Edge& e : roadmap.edges()) capacity = std::max(capacity, e.costs.size());

  RoadmapBuilder builder;
  for (const Vertex& v : roadmap.vertices()) builder.add_vertex(v.pos, v.clearance);

  // endpoint[e] = replacement ids for (u, v) of edge e.
  std::vector<std::pair<VertexId, VertexId>> endpoint(roadmap.edge_count());
  for (const Edge& e : roadmap.edges()) endpoint[static_cast<std::size_t>(e.id)] = {e.u, e.v};
  struct Link {
    VertexId a, b;
    double clearance;
  };
  std::vector<Link> links;

  for (const Vertex& v : roadmap.vertices()) {
    const int d = roadmap.degree(v.id);
    if (d <= 3) continue;
    std::vector<Incidence> around(roadmap.neighbors(v.id).begin(), roadmap.neighbors(v.id).end());
    auto angle = [&](const Incidence& inc) {
      const Point dir = roadmap.vertex(inc.neighbor).pos - v.pos;
      return std::atan2(dir.y, dir.x);
    };
    std::sort(around.begin(), around.end(), [&](const Incidence& x, const Incidence& y) {
      const double ax = angle(x);
      const double ay = angle(y);
      if (ax != ay) return ax < ay;
      return x.edge < y.edge;
    });
    std::vector<VertexId> chain{v.id};
    for (int k = 1; k < d - 2; ++k) chain.push_back(builder.add_vertex(v.pos, v.clearance));
    for (int k = 0; k < d; ++k) {
      const int slot = std::clamp(k - 1, 0, d - 3);
      const Edge& e = roadmap.edge(around[static_cast<std::size_t>(k)].edge);
      auto& ends = endpoint[static_cast<std::size_t>(e.id)];
      (e.u == v.id ? ends.first : ends.second) = chain[static_cast<std::size_t>(slot)];
    }
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) links.push_back({chain[k], chain[k + 1], v.clearance});
  }

  for (const Edge& e : roadmap.edges()) {
    const auto& [a, b] = endpoint[static_cast<std::size_t>(e.id)];
    builder.add_edge(a, b, e.length, e.clearance, e.is_virtual, e.costs);
  }
  for (const Link& l : links) {
    builder.add_edge(l.a, l.b, 0.0, l.clearance, true, CostVector(capacity, 0.0));
  }
  return std::move(builder).build();
}

Roadmap evaluate_edge_costs(const Roadmap& roadmap, int robots, double coefficient,
                            double clearance_weight) {
  if (robots < 1) throw ValidationError("robot count must be at least 1");
  if (!(coefficient >= 0.0)) throw ValidationError("coefficient k must be nonnegative");
  if (!(clearance_weight >= 0.0)) throw ValidationError("clearance weight must be nonnegative");
  std::vector<Edge> edges(roadmap.edges().begin(), roadmap.edges().end());
  const auto capacity = static_cast<std::size_t>(robots);
  for (Edge& e : edges) {
    if (e.is_virtual) {
      e.costs.assign(capacity, 0.0);
      continue;
    }
    if (!(e.clearance > 0.0)) {
      throw InternalError("edge " + std::to_string(e.id) +
                          " has non-positive clearance; it should have been filtered");
    }
    const double base = e.length * (1.0 + clearance_weight / e.clearance);
    e.costs.resize(capacity);
    for (std::size_t r = 1; r <= capacity; ++r) {
      e.costs[r - 1] = base * (1.0 + coefficient * static_cast<double>(r - 1) / 100.0);
    }
  }
  return Roadmap(std::vector<Vertex>(roadmap.vertices().begin(), roadmap.vertices().end()),
                 std::move(edges));
}

Terminals corner_terminals(const Roadmap& roadmap) {
  if (roadmap.vertex_count() < 2) throw ConstructionError("roadmap has fewer than two vertices");
  auto less = [](const Vertex& a, const Vertex& b) {
    if (a.pos.x != b.pos.x) return a.pos.x < b.pos.x;
    if (a.pos.y != b.pos.y) return a.pos.y < b.pos.y;
    return a.id < b.id;
  };
  const auto vs = roadmap.vertices();
  const auto lo = std::min_element(vs.begin(), vs.end(), less);
  const auto hi = std::max_element(vs.begin(), vs.end(), [&](const Vertex& a, const Vertex& b) {
    if (a.pos == b.pos) return a.id > b.id;  // prefer the smaller id among colocated vertices
    return less(a, b);
  });
  return {lo->id, hi->id};
}

BuiltRoadmap build_roadmap(const PolygonMap& map, const RoadmapBuildParams& params,
                           std::optional<std::pair<Point, Point>> terminals) {
  validate(params);
  Roadmap graph = filter_edges(build_skeleton(map, params), map, params.min_clearance);

  Point start_pos;
  Point goal_pos;
  if (terminals) {
    auto [with_start, s] = insert_terminal(graph, map, terminals->first);
    start_pos = with_start.vertex(s).pos;
    auto [with_goal, g] = insert_terminal(with_start, map, terminals->second);
    goal_pos = with_goal.vertex(g).pos;
    graph = keep_component(with_goal, relocate(with_goal, start_pos));
    if (!vertex_at(graph, goal_pos)) {
      throw ConstructionError("start and goal lie in different free-space components");
    }
  } else {
    graph = keep_component(graph);
    const Terminals corners = corner_terminals(graph);
    start_pos = graph.vertex(corners.start).pos;
    goal_pos = graph.vertex(corners.goal).pos;
  }
  if (start_pos == goal_pos) throw ConstructionError("start and goal coincide");

  auto keep = [&](const Roadmap& r) {
    return std::vector<VertexId>{relocate(r, start_pos), relocate(r, goal_pos)};
  };
  graph = prune_tails(graph, keep(graph));
  graph = contract_chains(graph, keep(graph));
  graph = reduce_degree(graph);
  graph = evaluate_edge_costs(graph, params.robots, params.coefficient, params.clearance_weight);
  return {graph, {relocate(graph, start_pos), relocate(graph, goal_pos)}};
}

}  // namespace formplan
