#include "formplan/map_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

Polygon box(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

void check_common(const MapGenParams& p) {
  if (!(p.width > 0.0) || !(p.height > 0.0)) throw ValidationError("map size must be positive");
  if (!(p.margin > 0.0)) throw ValidationError("margin must be positive");
  if (!(p.jitter >= 0.0 && p.jitter <= 1.0)) throw ValidationError("jitter must be in [0, 1]");
}

void check_cells(const MapGenParams& p) {
  if (p.rows < 1 || p.cols < 1) throw ValidationError("rows and cols must be at least 1");
  if (!(p.fill > 0.0 && p.fill < 1.0)) throw ValidationError("fill must be in (0, 1)");
}

// Places a block of fill * cell in the cell [x0,x1]x[y0,y1], shifted by
// jitter within the slack, keeping the margin on every side.
Polygon block_in_cell(double x0, double y0, double x1, double y1, const MapGenParams& p, Rng& rng) {
  const double w = (x1 - x0) * p.fill;
  const double h = (y1 - y0) * p.fill;
  const double slack_x = (x1 - x0 - w) * 0.5;
  const double slack_y = (y1 - y0 - h) * 0.5;
  if (slack_x < p.margin * 0.5 || slack_y < p.margin * 0.5) {
    throw ValidationError("cells too small for fill and margin; obstacles would touch");
  }
  const double free_x = slack_x - p.margin * 0.5;
  const double free_y = slack_y - p.margin * 0.5;
  const double cx = (x0 + x1) * 0.5 + p.jitter * rng.uniform(-free_x, free_x);
  const double cy = (y0 + y1) * 0.5 + p.jitter * rng.uniform(-free_y, free_y);
  return box(cx - w * 0.5, cy - h * 0.5, cx + w * 0.5, cy + h * 0.5);
}

PolygonMap grid_blocks(const MapGenParams& p, Rng& rng) {
  check_cells(p);
  PolygonMap map;
  map.border = {0.0, 0.0, p.width, p.height};
  const double cw = p.width / p.cols;
  const double ch = p.height / p.rows;
  for (int r = 0; r < p.rows; ++r) {
    for (int c = 0; c < p.cols; ++c) {
      map.obstacles.push_back(block_in_cell(c * cw, r * ch, (c + 1) * cw, (r + 1) * ch, p, rng));
    }
  }
  return map;
}

PolygonMap staggered_bricks(const MapGenParams& p, Rng& rng) {
  check_cells(p);
  PolygonMap map;
  map.border = {0.0, 0.0, p.width, p.height};
  const double cw = p.width / p.cols;
  const double ch = p.height / p.rows;
  // Flat bricks: half the fill along y. Odd rows are offset by half a cell.
  MapGenParams flat = p;
  flat.fill = p.fill * 0.5;
  for (int r = 0; r < p.rows; ++r) {
    const double shift = (r % 2 == 1) ? cw * 0.5 : 0.0;
    const int cells = (r % 2 == 1) ? p.cols - 1 : p.cols;
    for (int c = 0; c < cells; ++c) {
      const double x0 = shift + c * cw;
      const Polygon tall = block_in_cell(x0, r * ch, x0 + cw, (r + 1) * ch, p, rng);
      const Polygon thin = block_in_cell(x0, r * ch, x0 + cw, (r + 1) * ch, flat, rng);
      map.obstacles.push_back(box(tall[0].x, thin[0].y, tall[1].x, thin[2].y));
    }
  }
  return map;
}

PolygonMap variable_density(const MapGenParams& p, Rng& rng) {
  check_cells(p);
  PolygonMap map;
  map.border = {0.0, 0.0, p.width, p.height};
  // Column i holds rows + i blocks, so obstacles get denser left to right.
  const double cw = p.width / p.cols;
  for (int c = 0; c < p.cols; ++c) {
    const int rows = p.rows + c;
    const double ch = p.height / rows;
    for (int r = 0; r < rows; ++r) {
      map.obstacles.push_back(block_in_cell(c * cw, r * ch, (c + 1) * cw, (r + 1) * ch, p, rng));
    }
  }
  return map;
}

PolygonMap random_rects(const MapGenParams& p, Rng& rng) {
  if (p.count < 0) throw ValidationError("count must be nonnegative");
  if (!(p.min_size > 0.0) || p.max_size < p.min_size) {
    throw ValidationError("need 0 < min_size <= max_size");
  }
  if (p.max_attempts < 1) throw ValidationError("max_attempts must be at least 1");
  PolygonMap map;
  map.border = {0.0, 0.0, p.width, p.height};
  std::vector<Rect> placed;
  for (int i = 0; i < p.count; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < p.max_attempts && !done; ++attempt) {
      const double w = rng.uniform(p.min_size, p.max_size);
      const double h = rng.uniform(p.min_size, p.max_size);
      const double x_hi = p.width - p.margin - w;
      const double y_hi = p.height - p.margin - h;
      if (x_hi < p.margin || y_hi < p.margin) continue;
      const double x0 = rng.uniform(p.margin, x_hi);
      const double y0 = rng.uniform(p.margin, y_hi);
      const Rect cand{x0, y0, x0 + w, y0 + h};
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Rect& o) {
        return cand.xmin < o.xmax + p.margin && o.xmin < cand.xmax + p.margin &&
               cand.ymin < o.ymax + p.margin && o.ymin < cand.ymax + p.margin;
      });
      if (clash) continue;
      placed.push_back(cand);
      done = true;
    }
    if (!done) {
      throw ConstructionError("could not place obstacle " + std::to_string(i) + " after " +
                              std::to_string(p.max_attempts) + " attempts");
    }
  }
  for (const Rect& r : placed) map.obstacles.push_back(box(r.xmin, r.ymin, r.xmax, r.ymax));
  return map;
}

}  // namespace

const std::vector<std::string>& map_kinds() {
  static const std::vector<std::string> kinds{"grid-blocks", "staggered-bricks",
                                              "variable-density", "random-rects"};
  return kinds;
}

PolygonMap generate_map(const std::string& kind, const MapGenParams& params, std::uint64_t seed) {
  check_common(params);
  Rng rng(seed);
  PolygonMap map;
  if (kind == "grid-blocks") {
    map = grid_blocks(params, rng);
  } else if (kind == "staggered-bricks") {
    map = staggered_bricks(params, rng);
  } else if (kind == "variable-density") {
    map = variable_density(params, rng);
  } else if (kind == "random-rects") {
    map = random_rects(params, rng);
  } else {
    throw ValidationError("unknown map kind \"" + kind + "\"");
  }
  map.name = kind + "-" + std::to_string(seed);
  validate(map);
  return map;
}

}  // namespace formplan
