#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace formplan {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
constexpr Point midpoint(Point a, Point b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }

/// Sign of the turn a -> b -> c: positive for counter-clockwise.
constexpr double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

/// Axis-aligned rectangle. Valid when xmin < xmax and ymin < ymax.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  /// Corners in counter-clockwise order starting at (xmin, ymin).
  std::vector<Point> corners() const {
    return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

using Polygon = std::vector<Point>;

struct Projection {
  Point point;
  double t = 0.0;  // parameter along a->b, clamped to [0, 1]
  double distance = 0.0;
};

Projection project_onto_segment(Point p, Point a, Point b);
double distance_to_segment(Point p, Point a, Point b);

/// True when closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Point a, Point b, Point c, Point d);

/// True when the segments cross at a single point interior to both.
bool segments_cross_properly(Point a, Point b, Point c, Point d);

/// Even-odd point-in-polygon test. Points exactly on the boundary may go
/// either way; callers that care pair this with a boundary distance check.
bool point_in_polygon(Point p, std::span<const Point> polygon);

/// Shoelace area, positive for counter-clockwise loops.
double signed_area(std::span<const Point> polygon);

/// True when no two non-adjacent edges of the closed loop intersect and
/// adjacent edges meet only at their shared vertex.
bool is_simple_polygon(std::span<const Point> polygon);

/// Liang-Barsky clip of segment [a,b] to the rectangle; nullopt when the
/// segment misses it entirely.
std::optional<std::pair<Point, Point>> clip_segment(Point a, Point b, const Rect& rect);

}  // namespace formplan
