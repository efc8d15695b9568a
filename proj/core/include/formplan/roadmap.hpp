#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "formplan/model.hpp"

namespace formplan {

struct RoadmapBuildParams {
  double sampling_step = 1.0;   // boundary discretization pitch, meters
  double min_clearance = 1.0;   // edges narrower than this are dropped, meters
  double clearance_weight = 1.0;  // alpha in the edge cost
  double coefficient = 100.0;   // formation control coefficient k
  int robots = 1;               // cost-vector capacity R
};

void validate(const RoadmapBuildParams& params);

/// Boundary samples of the border and every obstacle loop, spaced at most
/// `step` apart, before perturbation.
std::vector<Point> sample_boundaries(const PolygonMap& map, double step);

/// Approximate Voronoi skeleton of the free space. Boundaries are sampled
/// into point sites, the point-site Voronoi diagram is taken as the dual of
/// their Delaunay triangulation and clipped to the border. Clearances are
/// measured against the actual polygons; an edge's clearance is the minimum
/// over its endpoints and midpoint. The result is raw: it still contains
/// edges reaching into obstacles and may be disconnected.
Roadmap build_skeleton(const PolygonMap& map, const RoadmapBuildParams& params);

/// Drops non-virtual edges with clearance below `min_clearance` (or zero),
/// whose midpoint is not in free space, or which touch an obstacle; then
/// drops vertices left isolated. Throws ConstructionError if nothing is left.
Roadmap filter_edges(const Roadmap& roadmap, const PolygonMap& map, double min_clearance);

/// Keeps the connected component containing `anchor`, or the one with the
/// most vertices (smallest minimum id on ties) when no anchor is given.
Roadmap keep_component(const Roadmap& roadmap, std::optional<VertexId> anchor = std::nullopt);

/// Repeatedly removes degree-1 vertices (and vertices left isolated) that
/// are not in `keep`, together with their edges.
Roadmap prune_tails(const Roadmap& roadmap, std::span<const VertexId> keep);

/// Replaces runs of degree-2 vertices outside `keep` by single edges whose
/// length is the run length and whose clearance is the run minimum. A run is
/// kept when collapsing it would create a self-loop or a parallel edge.
/// Cost vectors, when present, are summed.
Roadmap contract_chains(const Roadmap& roadmap, std::span<const VertexId> keep);

/// Adds `point` to the roadmap. A vertex within 1e-9 is reused; otherwise
/// the point is projected onto the nearest non-virtual edge (smallest id on
/// ties), the edge is split there, and a connector edge is added. Split
/// halves inherit the edge clearance. New edges carry no cost vector.
std::pair<Roadmap, VertexId> insert_terminal(const Roadmap& roadmap, Point point);

/// As above, but rejects points outside free space and measures the new
/// vertex and connector clearance against the map.
std::pair<Roadmap, VertexId> insert_terminal(const Roadmap& roadmap, const PolygonMap& map,
                                             Point point);

/// Splits every vertex of degree d > 3 into a chain of d-2 colocated
/// vertices joined by virtual edges (length 0, zero costs). Chain ends take
/// two of the original edges, interior vertices one, in angular order. The
/// original vertex keeps its id as the chain head; the rest are appended.
Roadmap reduce_degree(const Roadmap& roadmap);

/// c_r = length * (1 + alpha / clearance) * (1 + k (r - 1) / 100), r = 1..R,
/// on every non-virtual edge; virtual edges get R zeros. Throws
/// InternalError on a non-virtual edge with non-positive clearance.
Roadmap evaluate_edge_costs(const Roadmap& roadmap, int robots, double coefficient,
                            double clearance_weight);

struct Terminals {
  VertexId start;
  VertexId goal;
};

/// Lexicographic (x, y) minimum and maximum vertex: the left-bottom-most and
/// right-top-most nodes.
Terminals corner_terminals(const Roadmap& roadmap);

struct BuiltRoadmap {
  Roadmap roadmap;
  Terminals terminals;
};

/// Whole pipeline: skeleton, filtering, terminal insertion (or corner
/// selection), component selection, tail pruning, chain contraction, degree
/// reduction and cost evaluation.
BuiltRoadmap build_roadmap(const PolygonMap& map, const RoadmapBuildParams& params,
                           std::optional<std::pair<Point, Point>> terminals = std::nullopt);

}  // namespace formplan
