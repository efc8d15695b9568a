#include "formplan/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "formplan/errors.hpp"

namespace formplan {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("malformed JSON: ") + err.what());
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field \"" + key + "\"");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field \"" + key + "\" has the wrong type");
  }
}

Point point_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
  if (!out) throw Error("failed writing " + path);
}

PolygonMap load_map(std::string_view text) {
  const json doc = parse(text);
  PolygonMap map;
  map.name = doc.contains("name") ? field<std::string>(doc, "name", "map") : std::string();
  const auto border = field<std::vector<double>>(doc, "border", "map");
  if (border.size() != 4) throw ParseError("map: border must be [xmin, ymin, xmax, ymax]");
  map.border = {border[0], border[1], border[2], border[3]};
  if (doc.contains("obstacles")) {
    const json& obstacles = doc.at("obstacles");
    if (!obstacles.is_array()) throw ParseError("map: obstacles must be a list");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const std::string where = "obstacle " + std::to_string(i);
      if (!obstacles[i].is_array()) throw ParseError(where + ": expected a vertex list");
      Polygon poly;
      for (const json& p : obstacles[i]) poly.push_back(point_of(p, where));
      map.obstacles.push_back(std::move(poly));
    }
  }
  validate(map);
  return map;
}

std::string save_map(const PolygonMap& map) {
  json obstacles = json::array();
  for (const Polygon& poly : map.obstacles) {
    json loop = json::array();
    for (const Point& p : poly) loop.push_back({p.x, p.y});
    obstacles.push_back(std::move(loop));
  }
  return dump({{"name", map.name},
               {"border", {map.border.xmin, map.border.ymin, map.border.xmax, map.border.ymax}},
               {"obstacles", std::move(obstacles)}});
}

std::string save_roadmap(const Roadmap& roadmap) {
  json vertices = json::array();
  for (const Vertex& v : roadmap.vertices()) {
    vertices.push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}, {"clearance", v.clearance}});
  }
  json edges = json::array();
  for (const Edge& e : roadmap.edges()) {
    edges.push_back({{"id", e.id},
                     {"u", e.u},
                     {"v", e.v},
                     {"length", e.length},
                     {"clearance", e.clearance},
                     {"virtual", e.is_virtual},
                     {"costs", e.costs}});
  }
  return dump({{"vertices", std::move(vertices)}, {"edges", std::move(edges)}});
}

Roadmap load_roadmap(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw ParseError("roadmap: expected an object");
  const json& vs = doc.contains("vertices") ? doc.at("vertices") : json::array();
  const json& es = doc.contains("edges") ? doc.at("edges") : json::array();
  if (!vs.is_array() || !es.is_array()) throw ParseError("roadmap: vertices and edges must be lists");

  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "vertex " + std::to_string(i);
    vertices.push_back({field<VertexId>(vs[i], "id", where),
                        {field<double>(vs[i], "x", where), field<double>(vs[i], "y", where)},
                        field<double>(vs[i], "clearance", where)});
  }
  std::sort(vertices.begin(), vertices.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].id != static_cast<VertexId>(i)) {
      throw ValidationError("vertex ids must be 0.." + std::to_string(vertices.size() - 1) +
                            " without gaps");
    }
  }

  std::vector<Edge> edges;
  for (std::size_t j = 0; j < es.size(); ++j) {
    const std::string where = "edge " + std::to_string(j);
    Edge e;
    e.id = field<EdgeId>(es[j], "id", where);
    e.u = field<VertexId>(es[j], "u", where);
    e.v = field<VertexId>(es[j], "v", where);
    e.length = field<double>(es[j], "length", where);
    e.clearance = field<double>(es[j], "clearance", where);
    e.is_virtual = es[j].contains("virtual") ? field<bool>(es[j], "virtual", where) : false;
    if (es[j].contains("costs")) e.costs = field<CostVector>(es[j], "costs", where);
    edges.push_back(std::move(e));
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  return Roadmap(std::move(vertices), std::move(edges));
}

std::string save_pathset(const PathSet& set) {
  return dump({{"paths", set.paths}, {"costs", set.robot_costs}, {"objective", set.objective}});
}

std::vector<Path> load_paths(std::string_view text) {
  const json doc = parse(text);
  return field<std::vector<Path>>(doc, "paths", "plan");
}

PathSet load_pathset(std::string_view text, const Roadmap& roadmap) {
  std::vector<Path> paths = load_paths(text);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (VertexId v : paths[i]) {
      if (!roadmap.contains(v)) {
        throw ValidationError("path " + std::to_string(i) + " references unknown vertex " +
                                  std::to_string(v),
                              static_cast<int>(i));
      }
    }
  }
  return make_pathset(roadmap, std::move(paths));
}

std::string save_schedule(const Schedule& schedule) {
  json robots = json::array();
  for (const auto& entries : schedule.robots) {
    json steps = json::array();
    for (const ScheduleEntry& s : entries) steps.push_back({s.vertex, s.step});
    robots.push_back(std::move(steps));
  }
  return dump({{"paths", std::move(robots)}, {"k_min", schedule.k_min}});
}

}  // namespace formplan
