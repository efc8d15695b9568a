#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "formplan/geometry.hpp"

namespace formplan {

/// Counter-clockwise triangle over site indices.
using Triangle = std::array<int, 3>;

/// Incremental Bowyer-Watson triangulation. Input sites must be pairwise
/// distinct; near-degenerate inputs (collinear or cocircular runs) should be
/// perturbed by the caller.
std::vector<Triangle> delaunay_triangulate(std::span<const Point> sites);

/// Point-site Voronoi diagram restricted to bounded cells: one vertex per
/// Delaunay triangle (its circumcenter, after merging centers closer than
/// `merge_tolerance`) and one edge per interior Delaunay edge. Rays dual to
/// convex-hull edges are not produced.
struct VoronoiDiagram {
  std::vector<Point> vertices;
  std::vector<std::pair<int, int>> edges;
};

VoronoiDiagram voronoi_dual(std::span<const Point> sites, std::span<const Triangle> triangles,
                            double merge_tolerance);

Point circumcenter(Point a, Point b, Point c);

/// Positive when d lies strictly inside the circumcircle of CCW triangle abc.
double incircle(Point a, Point b, Point c, Point d);

}  // namespace formplan
