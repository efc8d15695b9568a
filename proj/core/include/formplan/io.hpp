#pragma once

#include <string>
#include <string_view>

#include "formplan/model.hpp"
#include "formplan/planner.hpp"

namespace formplan {

/// Whole file as text. Throws Error when the file cannot be read.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Parses and validates a map document. ParseError for malformed text,
/// ValidationError (with the polygon index) for invariant violations.
PolygonMap load_map(std::string_view text);
std::string save_map(const PolygonMap& map);

/// Doubles are written with round-trip precision, so load(save(x)) == x.
std::string save_roadmap(const Roadmap& roadmap);
Roadmap load_roadmap(std::string_view text);

std::string save_pathset(const PathSet& set);
/// Reads the paths back and re-prices them on `roadmap`.
PathSet load_pathset(std::string_view text, const Roadmap& roadmap);
/// Paths only, without pricing.
std::vector<Path> load_paths(std::string_view text);

std::string save_schedule(const Schedule& schedule);

}  // namespace formplan
