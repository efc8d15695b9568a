#pragma once

#include <span>
#include <string>

#include "formplan/model.hpp"
#include "formplan/planner.hpp"

namespace formplan {

struct SvgOptions {
  double width_px = 800.0;
  bool draw_roadmap = true;
  bool edge_labels = true;
};

/// Standalone SVG of the map, the roadmap, one polyline per path and a
/// robot-count label with a direction arrow on every used edge. The start
/// is drawn in blue and the goal in red. Throws ValidationError when a path
/// references an unknown vertex or steps between non-adjacent vertices.
std::string render_svg(const PolygonMap& map, const Roadmap& roadmap, std::span<const Path> paths,
                       const SvgOptions& options = {});

}  // namespace formplan
