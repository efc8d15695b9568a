#include "formplan/geometry.hpp"

#include <algorithm>

namespace formplan {

Projection project_onto_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  }
  const Point q = a + ab * t;
  return {q, t, distance(p, q)};
}

double distance_to_segment(Point p, Point a, Point b) {
  return project_onto_segment(p, a, b).distance;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int d1 = sign(orient(c, d, a));
  const int d2 = sign(orient(c, d, b));
  const int d3 = sign(orient(a, b, c));
  const int d4 = sign(orient(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

bool segments_cross_properly(Point a, Point b, Point c, Point d) {
  const int d1 = sign(orient(c, d, a));
  const int d2 = sign(orient(c, d, b));
  const int d3 = sign(orient(a, b, c));
  const int d4 = sign(orient(a, b, d));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

bool point_in_polygon(Point p, std::span<const Point> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& pi = polygon[i];
    const Point& pj = polygon[j];
    if ((pi.y > p.y) != (pj.y > p.y)) {
      const double x = pj.x + (p.y - pj.y) * (pi.x - pj.x) / (pi.y - pj.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

double signed_area(std::span<const Point> polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % n]);
  }
  return 0.5 * twice;
}

bool is_simple_polygon(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = polygon[j];
      const Point d = polygon[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Neighbouring edges may only share their common vertex: reject
        // folding back along the same line.
        const Point shared = (j == i + 1) ? b : a;
        const Point other_i = (j == i + 1) ? a : b;
        const Point other_j = (j == i + 1) ? d : c;
        if (orient(other_i, shared, other_j) == 0.0 &&
            dot(other_i - shared, other_j - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

std::optional<std::pair<Point, Point>> clip_segment(Point a, Point b, const Rect& rect) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Point d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - rect.xmin, rect.xmax - a.x, a.y - rect.ymin, rect.ymax - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return std::nullopt;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return std::nullopt;
      t1 = std::min(t1, r);
    }
  }
  // Rounding can leave a clipped end a hair outside the rectangle.
  auto snap = [&](Point p) {
    return Point{std::clamp(p.x, rect.xmin, rect.xmax), std::clamp(p.y, rect.ymin, rect.ymax)};
  };
  const Point from = t0 == 0.0 ? a : snap(a + d * t0);
  const Point to = t1 == 1.0 ? b : snap(a + d * t1);
  return std::make_pair(from, to);
}

}  // namespace formplan
