#pragma once

// Raster distance-transform oracle: rasterizes a map and computes the exact
// Euclidean distance transform of the pixel grid (Felzenszwalb-Huttenlocher),
// independently of the library's geometric clearance code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "formplan/model.hpp"

namespace formplan::testing {

class RasterClearance {
 public:
  RasterClearance(const PolygonMap& map, int resolution)
      : map_(map), n_(resolution), pitch_x_(map.border.width() / resolution),
        pitch_y_(map.border.height() / resolution) {
    // One blocked frame pixel on each side stands in for the border.
    const int w = n_ + 2;
    std::vector<double> grid(static_cast<std::size_t>(w) * w, 0.0);
    for (int j = 0; j < w; ++j) {
      for (int i = 0; i < w; ++i) {
        const bool frame = i == 0 || j == 0 || i == w - 1 || j == w - 1;
        const bool blocked = frame || inside_obstacle(center(i - 1, j - 1));
        grid[idx(i, j)] = blocked ? 0.0 : kInf;
      }
    }
    // Squared distances in pixel units per axis; the pitch may differ per axis.
    std::vector<double> f(static_cast<std::size_t>(w));
    std::vector<double> d(static_cast<std::size_t>(w));
    for (int j = 0; j < w; ++j) {
      for (int i = 0; i < w; ++i) f[static_cast<std::size_t>(i)] = grid[idx(i, j)];
      transform_1d(f, d, pitch_x_);
      for (int i = 0; i < w; ++i) grid[idx(i, j)] = d[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < w; ++j) f[static_cast<std::size_t>(j)] = grid[idx(i, j)];
      transform_1d(f, d, pitch_y_);
      for (int j = 0; j < w; ++j) grid[idx(i, j)] = d[static_cast<std::size_t>(j)];
    }
    dist_.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) dist_[k] = std::sqrt(grid[k]);
  }

  /// Distance from the pixel containing `p` to the nearest blocked pixel
  /// center. Points outside the border read 0.
  double at(Point p) const {
    if (!map_.border.contains(p)) return 0.0;
    const int i = std::clamp(static_cast<int>((p.x - map_.border.xmin) / pitch_x_), 0, n_ - 1);
    const int j = std::clamp(static_cast<int>((p.y - map_.border.ymin) / pitch_y_), 0, n_ - 1);
    return dist_[idx(i + 1, j + 1)];
  }

  /// Worst-case gap between the pixel reading and the exact distance.
  double resolution_error() const { return 1.5 * std::hypot(pitch_x_, pitch_y_); }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_ + 2) +
           static_cast<std::size_t>(i);
  }

  Point center(int i, int j) const {
    return {map_.border.xmin + (i + 0.5) * pitch_x_, map_.border.ymin + (j + 0.5) * pitch_y_};
  }

  // Ray casting, written out here so the oracle shares no code with the
  // library's point-in-polygon test.
  bool inside_obstacle(Point p) const {
    for (const Polygon& poly : map_.obstacles) {
      bool in = false;
      for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
        const Point pa = poly[a];
        const Point pb = poly[b];
        if ((pa.y > p.y) != (pb.y > p.y) &&
            p.x < (pb.x - pa.x) * (p.y - pa.y) / (pb.y - pa.y) + pa.x) {
          in = !in;
        }
      }
      if (in) return true;
    }
    return false;
  }

  // Lower envelope of parabolas; f holds squared distances (0 or inf).
  static void transform_1d(const std::vector<double>& f, std::vector<double>& d, double pitch) {
    const std::size_t n = f.size();
    std::vector<std::size_t> v;  // parabola apexes on the envelope
    std::vector<double> z;       // left boundary of each envelope piece
    auto intersect = [&](std::size_t q, std::size_t r) {
      const double xq = static_cast<double>(q) * pitch;
      const double xr = static_cast<double>(r) * pitch;
      return ((f[q] + xq * xq) - (f[r] + xr * xr)) / (2.0 * (xq - xr));
    };
    for (std::size_t q = 0; q < n; ++q) {
      if (f[q] == kInf) continue;
      double s = -kInf;
      while (!v.empty()) {
        s = intersect(q, v.back());
        if (s > z.back()) break;
        v.pop_back();
        z.pop_back();
        s = -kInf;
      }
      v.push_back(q);
      z.push_back(v.size() == 1 ? -kInf : s);
    }
    if (v.empty()) {
      std::fill(d.begin(), d.end(), kInf);
      return;
    }
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const double x = static_cast<double>(q) * pitch;
      while (j + 1 < v.size() && z[j + 1] < x) ++j;
      const double dx = x - static_cast<double>(v[j]) * pitch;
      d[q] = dx * dx + f[v[j]];
    }
  }

  const PolygonMap& map_;
  int n_;
  double pitch_x_;
  double pitch_y_;
  std::vector<double> dist_;
};

}  // namespace formplan::testing
