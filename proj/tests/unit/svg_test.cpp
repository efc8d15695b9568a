#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <map>
#include <set>
#include <sstream>

#include "formplan/errors.hpp"
#include "formplan/map_gen.hpp"
#include "formplan/roadmap.hpp"
#include "formplan/svg.hpp"
#include "graphs.hpp"

namespace formplan {
namespace {

namespace pt = boost::property_tree;

pt::ptree parse(const std::string& svg) {
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);  // throws on malformed XML
  return tree;
}

const pt::ptree* group(const pt::ptree& doc, const std::string& id) {
  for (const auto& [name, child] : doc.get_child("svg")) {
    if (name == "g" && child.get<std::string>("<xmlattr>.id", "") == id) return &child;
  }
  return nullptr;
}

std::size_t count(const pt::ptree* g, const std::string& tag) {
  if (!g) return 0;
  std::size_t n = 0;
  for (const auto& [name, child] : *g) n += name == tag;
  return n;
}

std::vector<int> labels(const pt::ptree& doc) {
  std::vector<int> out;
  const pt::ptree* g = group(doc, "labels");
  if (!g) return out;
  for (const auto& [name, child] : *g) {
    if (name == "text") out.push_back(std::stoi(child.data()));
  }
  return out;
}

PolygonMap frame(Rect border) {
  PolygonMap map;
  map.name = "frame <&>";
  map.border = border;
  return map;
}

TEST(Svg, EmptyPathSet) {
  const Roadmap r = testing::diamond();
  const pt::ptree doc = parse(render_svg(frame({-5, -15, 20, 15}), r, {}));
  EXPECT_EQ(count(group(doc, "roadmap"), "line"), r.edge_count());
  EXPECT_EQ(count(group(doc, "paths"), "polyline"), 0u);
  EXPECT_TRUE(labels(doc).empty());
  EXPECT_EQ(doc.get<std::string>("svg.title"), "frame <&>");
}

TEST(Svg, DiamondPlan) {
  const Roadmap r = testing::diamond();
  const std::vector<Path> plan{{0, 1, 3}, {0, 2, 3}};
  const std::string svg = render_svg(frame({-5, -15, 20, 15}), r, plan);
  const pt::ptree doc = parse(svg);
  EXPECT_EQ(count(group(doc, "paths"), "polyline"), 2u);
  EXPECT_EQ(labels(doc), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(count(group(doc, "labels"), "polygon"), 4u);  // one arrow per label
  bool start = false;
  bool goal = false;
  for (const auto& [name, child] : doc.get_child("svg")) {
    if (name != "circle") continue;
    const std::string id = child.get<std::string>("<xmlattr>.id");
    const std::string fill = child.get<std::string>("<xmlattr>.fill");
    if (id == "start") start = fill == "blue";
    if (id == "goal") goal = fill == "red";
  }
  EXPECT_TRUE(start);
  EXPECT_TRUE(goal);
}

TEST(Svg, UnknownVertexRejected) {
  const std::vector<Path> plan{{0, 9}};
  EXPECT_THROW(render_svg(frame({0, 0, 10, 10}), testing::diamond(), plan), ValidationError);
}

TEST(Svg, LabelsConserveFlowAcrossCuts) {
  MapGenParams gp;
  gp.rows = 2;
  gp.cols = 3;
  const PolygonMap map = generate_map("grid-blocks", gp, 3);
  RoadmapBuildParams params;
  params.min_clearance = 2.0;
  params.robots = 20;
  params.coefficient = 300.0;
  const BuiltRoadmap built = build_roadmap(map, params);
  const Roadmap& r = built.roadmap;
  const PathSet set = plan_sequential(r, {built.terminals.start, built.terminals.goal, 20, 300.0});
  const std::vector<int> shown = labels(parse(render_svg(map, r, set.paths)));

  // Labels come in edge-id order over used edges; directions from the paths.
  std::map<EdgeId, int> label_of;
  std::map<EdgeId, VertexId> head_of;
  for (const Path& p : set.paths) {
    for (std::size_t m = 0; m + 1 < p.size(); ++m) head_of[*r.find_edge(p[m], p[m + 1])] = p[m + 1];
  }
  ASSERT_EQ(shown.size(), head_of.size());
  std::size_t k = 0;
  for (const auto& [e, head] : head_of) label_of[e] = shown[k++];

  testing::Rng rng(1);
  const std::set<Path> distinct_paths(set.paths.begin(), set.paths.end());
  EXPECT_GT(distinct_paths.size(), 1u) << "high k should split the formation";
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<char> in_cut(r.vertex_count(), 0);
    for (auto& flag : in_cut) flag = rng.chance(0.5);
    in_cut[static_cast<std::size_t>(built.terminals.start)] = 1;
    in_cut[static_cast<std::size_t>(built.terminals.goal)] = 0;
    int net = 0;
    for (const auto& [e, head] : head_of) {
      const Edge& edge = r.edge(e);
      const VertexId tail = edge.other(head);
      const bool tail_in = in_cut[static_cast<std::size_t>(tail)];
      const bool head_in = in_cut[static_cast<std::size_t>(head)];
      if (tail_in && !head_in) net += label_of[e];
      if (!tail_in && head_in) net -= label_of[e];
    }
    ASSERT_EQ(net, 20) << "trial " << trial;
  }
}

}  // namespace
}  // namespace formplan
