#include "formplan/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "formplan/errors.hpp"

namespace formplan {

Point circumcenter(Point a, Point b, Point c) {
  const double bx = b.x - a.x;
  const double by = b.y - a.y;
  const double cx = c.x - a.x;
  const double cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
}

double incircle(Point a, Point b, Point c, Point d) {
  const long double adx = static_cast<long double>(a.x) - d.x;
  const long double ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x;
  const long double bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x;
  const long double cdy = static_cast<long double>(c.y) - d.y;
  const long double det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                          (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                          (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
  return static_cast<double>(det);
}

namespace {

const std::array<Point, 3> kSuperDirections{
    Point{-0.8660254037844386, -0.5}, Point{0.8660254037844386, -0.5}, Point{0.0, 1.0}};

// n[i] is the neighbour across the edge opposite v[i], i.e. the edge
// v[(i+1)%3] -> v[(i+2)%3].
struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> n{-1, -1, -1};
  bool alive = true;
};

class BowyerWatson {
 public:
  explicit BowyerWatson(std::span<const Point> sites) : site_count_(static_cast<int>(sites.size())) {
    pts_.assign(sites.begin(), sites.end());
    double xmin = sites[0].x, xmax = sites[0].x, ymin = sites[0].y, ymax = sites[0].y;
    for (const Point& p : sites) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1.0});
    center_ = {(xmin + xmax) * 0.5, (ymin + ymax) * 0.5};
    for (const Point& d : kSuperDirections) pts_.push_back(center_ + d * (20.0 * span));
    tris_.push_back({{site_count_, site_count_ + 1, site_count_ + 2}});
    mark_.push_back(0);
  }

  void insert_all() {
    for (int idx : spatial_order()) insert(idx);
  }

  std::vector<Triangle> result() const {
    std::vector<Triangle> out;
    for (const Tri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= site_count_ || t.v[1] >= site_count_ || t.v[2] >= site_count_) continue;
      out.push_back({t.v[0], t.v[1], t.v[2]});
    }
    return out;
  }

 private:
  // Row-snake order over a coarse grid keeps successive sites close, so the
  // walking point location stays short.
  std::vector<int> spatial_order() const {
    std::vector<int> order(static_cast<std::size_t>(site_count_));
    std::iota(order.begin(), order.end(), 0);
    if (site_count_ < 2) return order;
    double ymin = pts_[0].y, ymax = pts_[0].y;
    for (int i = 0; i < site_count_; ++i) {
      ymin = std::min(ymin, pts_[static_cast<std::size_t>(i)].y);
      ymax = std::max(ymax, pts_[static_cast<std::size_t>(i)].y);
    }
    const double rows = std::max(1.0, std::floor(std::sqrt(static_cast<double>(site_count_)) / 2.0));
    const double cell = std::max((ymax - ymin) / rows, 1e-12);
    auto row_of = [&](int i) {
      return static_cast<long>(std::floor((pts_[static_cast<std::size_t>(i)].y - ymin) / cell));
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const long ra = row_of(a);
      const long rb = row_of(b);
      if (ra != rb) return ra < rb;
      const double xa = pts_[static_cast<std::size_t>(a)].x;
      const double xb = pts_[static_cast<std::size_t>(b)].x;
      if (xa != xb) return (ra % 2 == 0) ? xa < xb : xa > xb;
      return a < b;
    });
    return order;
  }

  const Point& pt(int i) const { return pts_[static_cast<std::size_t>(i)]; }
  Tri& tri(int t) { return tris_[static_cast<std::size_t>(t)]; }

  bool is_super(int i) const { return i >= site_count_; }
  Point direction(int i) const { return kSuperDirections[static_cast<std::size_t>(i - site_count_)]; }

  // Orientation of (i, j, p) for a real point p, with the super vertices
  // taken as points at infinity along their directions.
  double side(int i, int j, Point p) const {
    if (!is_super(i) && !is_super(j)) return orient(pt(i), pt(j), p);
    if (is_super(i) && is_super(j)) return cross(direction(i), direction(j));
    if (is_super(j)) {
      const double s = cross(pt(i) - p, direction(j));
      return s != 0.0 ? s : cross(pt(i) - p, center_ - p);
    }
    const double s = cross(p - pt(j), direction(i));
    return s != 0.0 ? s : cross(p - pt(j), center_ - pt(j));
  }

  bool contains(int t, Point p) const {
    const Tri& tr = tris_[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      if (side(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p) < 0.0) return false;
    }
    return true;
  }

  int locate(Point p) {
    int t = last_;
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps && t >= 0; ++step) {
      const Tri& tr = tri(t);
      int next = -2;
      for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>((k + step) % 3);
        if (side(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], p) < 0.0) {
          next = tr.n[static_cast<std::size_t>(i)];
          break;
        }
      }
      if (next == -2) return t;
      t = next;
    }
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      const int cand = static_cast<int>(k);
      if (tri(cand).alive && contains(cand, p)) return cand;
    }
    throw InternalError("Delaunay point location failed");
  }

  // Circumcircles through super vertices degenerate to half-planes.
  bool in_circle(int t, Point p) {
    std::array<int, 3> v = tri(t).v;
    const int supers = is_super(v[0]) + is_super(v[1]) + is_super(v[2]);
    if (supers == 0) return incircle(pt(v[0]), pt(v[1]), pt(v[2]), p) > 0.0;
    if (supers == 3) return true;
    // Rotate (keeping orientation) so real vertices come first.
    while (is_super(v[0]) || (supers == 1 && is_super(v[1]))) std::rotate(v.begin(), v.begin() + 1, v.end());
    if (supers == 1) {
      const Point a = pt(v[0]);
      const Point b = pt(v[1]);
      const double o = orient(a, b, p);
      return o > 0.0 || (o == 0.0 && dot(p - a, p - b) < 0.0);
    }
    const Point q = circumcenter({0.0, 0.0}, direction(v[1]), direction(v[2]));
    return dot(p - pt(v[0]), q) > 0.0;
  }

  void insert(int idx) {
    const Point p = pt(idx);
    const int seed = locate(p);
    ++epoch_;

    std::vector<int> cavity{seed};
    mark_[static_cast<std::size_t>(seed)] = epoch_;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      for (int nb : tri(cavity[k]).n) {
        if (nb < 0 || mark_[static_cast<std::size_t>(nb)] == epoch_) continue;
        if (in_circle(nb, p)) {
          mark_[static_cast<std::size_t>(nb)] = epoch_;
          cavity.push_back(nb);
        }
      }
    }

    // The cavity must be star-shaped from p. Rounding can admit a triangle
    // whose outer edge p cannot see; shrink until every boundary edge is
    // strictly visible.
    struct Boundary {
      int a, b, outside, owner;
    };
    std::vector<Boundary> boundary;
    for (bool shrunk = true; shrunk;) {
      shrunk = false;
      boundary.clear();
      for (std::size_t k = 0; k < cavity.size() && !shrunk; ++k) {
        const int t = cavity[k];
        const Tri& tr = tri(t);
        for (int i = 0; i < 3; ++i) {
          const int nb = tr.n[static_cast<std::size_t>(i)];
          if (nb >= 0 && mark_[static_cast<std::size_t>(nb)] == epoch_) continue;
          const int a = tr.v[static_cast<std::size_t>((i + 1) % 3)];
          const int b = tr.v[static_cast<std::size_t>((i + 2) % 3)];
          if (side(a, b, p) <= 0.0 && t != seed) {
            mark_[static_cast<std::size_t>(t)] = 0;
            cavity.erase(cavity.begin() + static_cast<std::ptrdiff_t>(k));
            shrunk = true;
            break;
          }
          boundary.push_back({a, b, nb, t});
        }
      }
    }

    std::unordered_map<int, int> starting_at;
    starting_at.reserve(boundary.size() * 2);
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const Boundary& e : boundary) {
      const int id = static_cast<int>(tris_.size());
      Tri fresh{{e.a, e.b, idx}};
      fresh.n[2] = e.outside;
      tris_.push_back(fresh);
      mark_.push_back(0);
      if (e.outside >= 0) {
        for (int& back : tri(e.outside).n) {
          if (back == e.owner) back = id;
        }
      }
      starting_at[e.a] = id;
      created.push_back(id);
    }
    for (int id : created) {
      Tri& t = tri(id);
      const int across = starting_at.at(t.v[1]);  // shares edge v[1] -> p
      t.n[0] = across;
      tri(across).n[1] = id;
    }
    for (int t : cavity) tri(t).alive = false;
    last_ = created.front();
  }

  int site_count_;
  Point center_;
  std::vector<Point> pts_;
  std::vector<Tri> tris_;
  std::vector<unsigned> mark_;
  unsigned epoch_ = 0;
  int last_ = 0;
};

}  // namespace

std::vector<Triangle> delaunay_triangulate(std::span<const Point> sites) {
  if (sites.size() < 3) return {};
  BowyerWatson mesh(sites);
  mesh.insert_all();
  return mesh.result();
}

VoronoiDiagram voronoi_dual(std::span<const Point> sites, std::span<const Triangle> triangles,
                            double merge_tolerance) {
  VoronoiDiagram out;
  const double cell = std::max(merge_tolerance, 1e-12);
  std::map<std::pair<long long, long long>, std::vector<int>> grid;
  std::vector<int> rep(triangles.size());

  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tr = triangles[t];
    const Point c = circumcenter(sites[static_cast<std::size_t>(tr[0])],
                                 sites[static_cast<std::size_t>(tr[1])],
                                 sites[static_cast<std::size_t>(tr[2])]);
    const auto gx = static_cast<long long>(std::floor(c.x / cell));
    const auto gy = static_cast<long long>(std::floor(c.y / cell));
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
        auto it = grid.find({gx + dx, gy + dy});
        if (it == grid.end()) continue;
        for (int cand : it->second) {
          if (distance(out.vertices[static_cast<std::size_t>(cand)], c) <= merge_tolerance) {
            found = cand;
            break;
          }
        }
      }
    }
    if (found < 0) {
      found = static_cast<int>(out.vertices.size());
      out.vertices.push_back(c);
      grid[{gx, gy}].push_back(found);
    }
    rep[t] = found;
  }

  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tr = triangles[t];
    for (int i = 0; i < 3; ++i) directed[{tr[static_cast<std::size_t>(i)], tr[static_cast<std::size_t>((i + 1) % 3)]}] = static_cast<int>(t);
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [edge, t] : directed) {
    auto twin = directed.find({edge.second, edge.first});
    if (twin == directed.end() || twin->second < t) continue;
    int a = rep[static_cast<std::size_t>(t)];
    int b = rep[static_cast<std::size_t>(twin->second)];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) out.edges.emplace_back(a, b);
  }
  return out;
}

}  // namespace formplan
