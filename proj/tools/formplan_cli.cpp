#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "formplan/bench.hpp"
#include "formplan/errors.hpp"
#include "formplan/io.hpp"
#include "formplan/map_gen.hpp"
#include "formplan/optimizer.hpp"
#include "formplan/oracle.hpp"
#include "formplan/planner.hpp"
#include "formplan/roadmap.hpp"
#include "formplan/svg.hpp"

namespace fp = formplan;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInfeasible = 2, kBudget = 3 };

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    fp::write_file(path, text);
  }
}

std::optional<fp::Point> parse_point(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::istringstream in(s);
  fp::Point p;
  char comma = 0;
  if (!(in >> p.x >> comma >> p.y) || comma != ',') {
    throw fp::ValidationError("expected a point as x,y but got \"" + s + "\"");
  }
  return p;
}

struct CostFlags {
  std::optional<double> k;
  double alpha = 1.0;
};

// Re-prices the roadmap when --k is given; otherwise the file's costs are used.
fp::Roadmap priced(const fp::Roadmap& roadmap, int robots, const CostFlags& flags) {
  if (!flags.k) return roadmap;
  return fp::evaluate_edge_costs(roadmap, robots, *flags.k, flags.alpha);
}

fp::PlanQuery make_query(const fp::Roadmap& roadmap, int robots, const CostFlags& flags,
                         std::optional<int> start, std::optional<int> goal) {
  const fp::Terminals corners = fp::corner_terminals(roadmap);
  return {start.value_or(corners.start), goal.value_or(corners.goal), robots, flags.k.value_or(0.0)};
}

void report(const fp::PathSet& set, const fp::PlanQuery& query) {
  std::cerr << "start " << query.start << " goal " << query.goal << " robots " << query.robots
            << " objective " << set.objective << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formation path planning on Voronoi roadmaps"};
  app.require_subcommand(1);

  // build-roadmap
  auto* build = app.add_subcommand("build-roadmap", "Extract a planning roadmap from a map file");
  std::string build_map;
  std::string build_out;
  std::string build_start;
  std::string build_goal;
  fp::RoadmapBuildParams params;
  build->add_option("map", build_map, "Map JSON file")->required();
  build->add_option("--step", params.sampling_step, "Boundary sampling step (m)");
  build->add_option("--min-clearance", params.min_clearance, "Edge clearance threshold (m)");
  build->add_option("--alpha", params.clearance_weight, "Clearance weight in the edge cost");
  build->add_option("--robots", params.robots, "Cost-vector length R");
  build->add_option("--k", params.coefficient, "Formation control coefficient");
  build->add_option("--start", build_start, "Start point x,y (default: left-bottom vertex)");
  build->add_option("--goal", build_goal, "Goal point x,y (default: right-top vertex)");
  build->add_option("-o,--output", build_out, "Output file (default stdout)");

  // plan
  auto* plan = app.add_subcommand("plan", "Plan a formation on a roadmap");
  std::string plan_roadmap;
  std::string plan_out;
  std::string plan_schedule;
  int plan_robots = 1;
  CostFlags plan_costs;
  bool plan_optimize = false;
  int opt_rounds = 1;
  std::optional<int> plan_start;
  std::optional<int> plan_goal;
  plan->add_option("roadmap", plan_roadmap, "Roadmap JSON file")->required();
  plan->add_option("--robots", plan_robots, "Number of robots R")->required();
  plan->add_option("--k", plan_costs.k, "Re-evaluate costs with this coefficient");
  plan->add_option("--alpha", plan_costs.alpha, "Clearance weight used with --k");
  plan->add_flag("--optimize", plan_optimize, "Run the improvement pass after every robot");
  plan->add_option("--opt-rounds", opt_rounds, "Improvement sweeps per added robot");
  plan->add_option("--start-id", plan_start, "Start vertex (default: left-bottom vertex)");
  plan->add_option("--goal-id", plan_goal, "Goal vertex (default: right-top vertex)");
  plan->add_option("-o,--output", plan_out, "Plan output file (default stdout)");
  plan->add_option("--schedule", plan_schedule, "Also write the wait schedule here");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum over simple-path tuples");
  std::string oracle_roadmap;
  std::string oracle_out;
  int oracle_robots = 1;
  CostFlags oracle_costs;
  fp::OracleLimits limits;
  std::optional<int> oracle_start;
  std::optional<int> oracle_goal;
  oracle->add_option("roadmap", oracle_roadmap, "Roadmap JSON file")->required();
  oracle->add_option("--robots", oracle_robots, "Number of robots R")->required();
  oracle->add_option("--k", oracle_costs.k, "Re-evaluate costs with this coefficient");
  oracle->add_option("--alpha", oracle_costs.alpha, "Clearance weight used with --k");
  oracle->add_option("--max-paths", limits.max_simple_paths, "Simple path budget");
  oracle->add_option("--max-combos", limits.max_combinations, "Path multiset budget");
  oracle->add_option("--start-id", oracle_start, "Start vertex");
  oracle->add_option("--goal-id", oracle_goal, "Goal vertex");
  oracle->add_option("-o,--output", oracle_out, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark configuration");
  std::string bench_config;
  bench->add_option("config", bench_config, "Benchmark config JSON")->required();

  // render
  auto* render = app.add_subcommand("render", "Draw a map, roadmap and plan as SVG");
  std::string render_map;
  std::string render_roadmap;
  std::string render_plan;
  std::string render_out;
  render->add_option("map", render_map, "Map JSON file")->required();
  render->add_option("roadmap", render_roadmap, "Roadmap JSON file")->required();
  render->add_option("plan", render_plan, "Plan JSON file (optional)");
  render->add_option("-o,--output", render_out, "SVG output file")->required();

  // gen-map
  auto* gen = app.add_subcommand("gen-map", "Generate a synthetic map");
  std::string gen_kind;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  fp::MapGenParams gp;
  gen->add_option("--kind", gen_kind, "grid-blocks | staggered-bricks | variable-density | random-rects")
      ->required();
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--width", gp.width);
  gen->add_option("--height", gp.height);
  gen->add_option("--rows", gp.rows);
  gen->add_option("--cols", gp.cols);
  gen->add_option("--fill", gp.fill, "Obstacle extent per cell, fraction");
  gen->add_option("--jitter", gp.jitter, "Random shift within the cell slack, fraction");
  gen->add_option("--count", gp.count, "random-rects: obstacle count");
  gen->add_option("--min-size", gp.min_size);
  gen->add_option("--max-size", gp.max_size);
  gen->add_option("--margin", gp.margin);
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) {
      const fp::PolygonMap map = fp::load_map(fp::read_file(build_map));
      std::optional<std::pair<fp::Point, fp::Point>> terminals;
      const auto s = parse_point(build_start);
      const auto g = parse_point(build_goal);
      if (s.has_value() != g.has_value()) {
        throw fp::ValidationError("--start and --goal must be given together");
      }
      if (s) terminals = std::make_pair(*s, *g);
      const fp::BuiltRoadmap built = fp::build_roadmap(map, params, terminals);
      emit(build_out, fp::save_roadmap(built.roadmap));
      std::cerr << built.roadmap.vertex_count() << " vertices, " << built.roadmap.edge_count()
                << " edges; start " << built.terminals.start << " goal " << built.terminals.goal
                << "\n";
    } else if (*plan) {
      const fp::Roadmap roadmap = priced(fp::load_roadmap(fp::read_file(plan_roadmap)),
                                         plan_robots, plan_costs);
      const fp::PlanQuery query = make_query(roadmap, plan_robots, plan_costs, plan_start, plan_goal);
      fp::OptimizerOptions options;
      options.rounds = opt_rounds;
      std::vector<fp::OptimizerDiagnostic> notes;
      const fp::PathSet set = plan_optimize ? fp::plan_optimized(roadmap, query, options, &notes)
                                            : fp::plan_sequential(roadmap, query);
      for (const auto& note : notes) std::cerr << "note: robot " << note.robot << ": " << note.message << "\n";
      emit(plan_out, fp::save_pathset(set));
      if (!plan_schedule.empty()) fp::write_file(plan_schedule, fp::save_schedule(fp::make_schedule(set.paths)));
      report(set, query);
    } else if (*oracle) {
      const fp::Roadmap roadmap = priced(fp::load_roadmap(fp::read_file(oracle_roadmap)),
                                         oracle_robots, oracle_costs);
      const fp::PlanQuery query =
          make_query(roadmap, oracle_robots, oracle_costs, oracle_start, oracle_goal);
      const fp::PathSet set = fp::exhaustive_optimum(roadmap, query, limits);
      emit(oracle_out, fp::save_pathset(set));
      report(set, query);
    } else if (*bench) {
      const std::string base = std::filesystem::path(bench_config).parent_path().string();
      const fp::BenchConfig config = fp::parse_bench_config(fp::read_file(bench_config), base);
      const auto records = fp::run_benchmark(config);
      const fp::Summary summary = fp::summarize(records);
      if (!config.records_path.empty()) fp::write_file(config.records_path, fp::records_to_json(records));
      if (!config.summary_path.empty()) fp::write_file(config.summary_path, fp::summary_to_json(summary));
      const std::string table = fp::summary_table(summary);
      if (!config.table_path.empty()) fp::write_file(config.table_path, table);
      std::cout << table;
    } else if (*render) {
      const fp::PolygonMap map = fp::load_map(fp::read_file(render_map));
      const fp::Roadmap roadmap = fp::load_roadmap(fp::read_file(render_roadmap));
      std::vector<fp::Path> paths;
      if (!render_plan.empty()) paths = fp::load_paths(fp::read_file(render_plan));
      fp::write_file(render_out, fp::render_svg(map, roadmap, paths));
    } else if (*gen) {
      emit(gen_out, fp::save_map(fp::generate_map(gen_kind, gp, gen_seed)));
    }
  } catch (const fp::OracleBudgetError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kBudget;
  } catch (const fp::PlanningError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInfeasible;
  } catch (const fp::ScheduleConflict& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  }
  return kOk;
}
