#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "formplan/model.hpp"

namespace formplan {

/// Knobs shared by the synthetic map generators. Each kind reads the subset
/// it needs; lengths are in meters.
struct MapGenParams {
  double width = 100.0;
  double height = 100.0;
  int rows = 3;
  int cols = 3;
  double fill = 0.5;    // obstacle extent as a fraction of its cell, per axis
  double jitter = 0.0;  // random shift as a fraction of the free slack in a cell
  int count = 10;       // random-rects
  double min_size = 5.0;
  double max_size = 15.0;
  double margin = 2.0;  // minimum gap between obstacles and to the border
  int max_attempts = 1000;
};

/// "grid-blocks", "staggered-bricks", "variable-density", "random-rects".
const std::vector<std::string>& map_kinds();

/// Deterministic for a given (kind, params, seed). Throws ValidationError
/// for unknown kinds or parameters that would make obstacles overlap, and
/// ConstructionError when random placement gives up after max_attempts.
PolygonMap generate_map(const std::string& kind, const MapGenParams& params, std::uint64_t seed);

}  // namespace formplan
