#include "formplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "formplan/errors.hpp"
#include "formplan/io.hpp"
#include "formplan/optimizer.hpp"
#include "formplan/planner.hpp"

namespace formplan {

using nlohmann::json;

namespace {

constexpr double kOptimalTolerance = 1e-9;

std::string resolve(const std::string& base_dir, const std::string& file) {
  if (file.empty() || base_dir.empty()) return file;
  const std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(base_dir) / p).string();
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("bench config: field \"") + key + "\" has the wrong type");
  }
}

Point point_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("bench config: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

MapGenParams gen_params(const json& j) {
  MapGenParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ParseError("bench config: generator params must be an object");
  p.width = get_or(j, "width", p.width);
  p.height = get_or(j, "height", p.height);
  p.rows = get_or(j, "rows", p.rows);
  p.cols = get_or(j, "cols", p.cols);
  p.fill = get_or(j, "fill", p.fill);
  p.jitter = get_or(j, "jitter", p.jitter);
  p.count = get_or(j, "count", p.count);
  p.min_size = get_or(j, "min_size", p.min_size);
  p.max_size = get_or(j, "max_size", p.max_size);
  p.margin = get_or(j, "margin", p.margin);
  p.max_attempts = get_or(j, "max_attempts", p.max_attempts);
  return p;
}

struct PreparedMap {
  std::string name;
  Roadmap geometry;
  Terminals terminals{};
};

PreparedMap prepare(const MapSpec& spec, const BenchConfig& config) {
  RoadmapBuildParams params = config.build;
  params.robots = 1;
  PreparedMap out;
  if (!spec.roadmap_file.empty()) {
    out.name = spec.label.empty() ? std::filesystem::path(spec.roadmap_file).stem().string()
                                  : spec.label;
    out.geometry = load_roadmap(read_file(spec.roadmap_file));
    if (config.terminal_points) {
      auto [with_start, s] = insert_terminal(out.geometry, config.terminal_points->first);
      auto [with_goal, g] = insert_terminal(with_start, config.terminal_points->second);
      out.geometry = std::move(with_goal);
      out.terminals = {s, g};
    } else {
      out.terminals = corner_terminals(out.geometry);
    }
  } else {
    PolygonMap map = spec.map_file.empty() ? generate_map(spec.kind, spec.params, spec.seed)
                                           : load_map(read_file(spec.map_file));
    out.name = !spec.label.empty() ? spec.label
               : !map.name.empty() ? map.name
                                   : std::filesystem::path(spec.map_file).stem().string();
    BuiltRoadmap built = build_roadmap(map, params, config.terminal_points);
    out.geometry = std::move(built.roadmap);
    out.terminals = built.terminals;
  }
  if (config.terminal_ids) out.terminals = {config.terminal_ids->first, config.terminal_ids->second};
  return out;
}

template <typename F>
auto timed(double& seconds, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void run_one(ExperimentRecord& rec, const Roadmap& geometry, const BenchConfig& config) {
  const Roadmap roadmap = evaluate_edge_costs(geometry, rec.robots, rec.coefficient,
                                              config.build.clearance_weight);
  const PlanQuery query{rec.start, rec.goal, rec.robots, rec.coefficient};
  const PathSet seq = timed(rec.runtime_seq, [&] { return plan_sequential(roadmap, query); });
  OptimizerOptions options;
  options.rounds = config.opt_rounds;
  const PathSet opt = timed(rec.runtime_opt, [&] { return plan_optimized(roadmap, query, options); });
  rec.seq_objective = seq.objective;
  rec.opt_objective = opt.objective;
  if (!config.oracle) return;
  try {
    const PathSet best = exhaustive_optimum(roadmap, query, config.limits);
    rec.oracle_status = "ok";
    rec.oracle_objective = best.objective;
    rec.gap_seq = gap(seq.objective, best.objective);
    rec.gap_opt = gap(opt.objective, best.objective);
  } catch (const OracleBudgetError&) {
    rec.oracle_status = "budget";
  } catch (const PlanningError& err) {
    if (err.kind() != PlanningError::Kind::NoFeasiblePlan) throw;
    rec.oracle_status = "infeasible";
  }
}

Distribution distribution(std::vector<double> xs) {
  Distribution d;
  if (xs.empty()) return d;
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  d.mean = sum / static_cast<double>(xs.size());
  d.max = xs.back();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - static_cast<double>(lo));
  };
  d.p50 = quantile(0.5);
  d.p90 = quantile(0.9);
  d.p95 = quantile(0.95);
  return d;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json distribution_json(const Distribution& d) {
  return {{"mean", d.mean}, {"max", d.max}, {"p50", d.p50}, {"p90", d.p90}, {"p95", d.p95}};
}

}  // namespace

BenchConfig parse_bench_config(std::string_view text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("bench config: malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError("bench config: expected an object");
  BenchConfig cfg;
  if (doc.contains("build")) {
    const json& b = doc.at("build");
    cfg.build.sampling_step = get_or(b, "sampling_step", cfg.build.sampling_step);
    cfg.build.min_clearance = get_or(b, "min_clearance", cfg.build.min_clearance);
    cfg.build.clearance_weight = get_or(b, "alpha", cfg.build.clearance_weight);
  }
  validate(cfg.build);

  if (!doc.contains("maps") || !doc.at("maps").is_array() || doc.at("maps").empty()) {
    throw ParseError("bench config: \"maps\" must be a non-empty list");
  }
  for (const json& m : doc.at("maps")) {
    MapSpec spec;
    spec.label = get_or<std::string>(m, "name", "");
    if (m.contains("file")) {
      spec.map_file = resolve(base_dir, m.at("file").get<std::string>());
    } else if (m.contains("roadmap")) {
      spec.roadmap_file = resolve(base_dir, m.at("roadmap").get<std::string>());
    } else if (m.contains("generate")) {
      const json& g = m.at("generate");
      spec.kind = get_or<std::string>(g, "kind", "");
      spec.seed = get_or<std::uint64_t>(g, "seed", 0);
      spec.params = gen_params(g.contains("params") ? g.at("params") : json());
    } else {
      throw ParseError("bench config: each map needs \"file\", \"roadmap\" or \"generate\"");
    }
    cfg.maps.push_back(std::move(spec));
  }

  cfg.robots = get_or(doc, "robots", cfg.robots);
  cfg.coefficients = get_or(doc, "k", cfg.coefficients);
  if (cfg.robots.empty() || cfg.coefficients.empty()) {
    throw ParseError("bench config: \"robots\" and \"k\" must be non-empty");
  }
  for (int r : cfg.robots) {
    if (r < 1) throw ValidationError("bench config: robot counts must be at least 1");
  }
  for (double k : cfg.coefficients) {
    if (!(k >= 0.0)) throw ValidationError("bench config: k must be nonnegative");
  }

  if (doc.contains("terminals")) {
    const json& t = doc.at("terminals");
    if (t.is_string()) {
      if (t.get<std::string>() != "corners") {
        throw ParseError("bench config: terminals must be \"corners\" or an object");
      }
    } else if (t.contains("start_id")) {
      cfg.terminal_ids = {t.at("start_id").get<VertexId>(), t.at("goal_id").get<VertexId>()};
    } else if (t.contains("start")) {
      cfg.terminal_points = {point_of(t.at("start")), point_of(t.at("goal"))};
    } else {
      throw ParseError("bench config: unrecognized terminals entry");
    }
  }

  if (doc.contains("oracle")) {
    const json& o = doc.at("oracle");
    cfg.oracle = get_or(o, "enabled", true);
    cfg.limits.max_simple_paths = get_or(o, "max_paths", cfg.limits.max_simple_paths);
    cfg.limits.max_combinations = get_or(o, "max_combos", cfg.limits.max_combinations);
  }
  cfg.opt_rounds = get_or(doc, "opt_rounds", cfg.opt_rounds);
  if (cfg.opt_rounds < 1) throw ValidationError("bench config: opt_rounds must be at least 1");

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    cfg.records_path = resolve(base_dir, get_or<std::string>(out, "records", ""));
    cfg.summary_path = resolve(base_dir, get_or<std::string>(out, "summary", ""));
    cfg.table_path = resolve(base_dir, get_or<std::string>(out, "table", ""));
  }
  return cfg;
}

std::vector<ExperimentRecord> run_benchmark(const BenchConfig& config) {
  std::vector<ExperimentRecord> records;
  for (const MapSpec& spec : config.maps) {
    std::optional<PreparedMap> prepared;
    std::string failure;
    try {
      prepared = prepare(spec, config);
    } catch (const std::exception& err) {
      failure = err.what();
    }
    for (int robots : config.robots) {
      for (double k : config.coefficients) {
        ExperimentRecord rec;
        rec.robots = robots;
        rec.coefficient = k;
        if (!prepared) {
          rec.map_name = !spec.label.empty() ? spec.label
                         : !spec.map_file.empty() ? spec.map_file
                         : !spec.roadmap_file.empty() ? spec.roadmap_file
                                                      : spec.kind + "-" + std::to_string(spec.seed);
          rec.failed = true;
          rec.error = failure;
          records.push_back(std::move(rec));
          continue;
        }
        rec.map_name = prepared->name;
        rec.start = prepared->terminals.start;
        rec.goal = prepared->terminals.goal;
        rec.roadmap_vertices = prepared->geometry.vertex_count();
        try {
          run_one(rec, prepared->geometry, config);
        } catch (const std::exception& err) {
          rec.failed = true;
          rec.error = err.what();
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

Summary summarize(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw ValidationError("cannot summarize an empty record list");
  Summary s;
  s.records = records.size();
  std::vector<double> gaps_seq;
  std::vector<double> gaps_opt;
  std::map<std::pair<std::string, int>, std::size_t> row_of;
  std::vector<std::pair<double, double>> totals;
  for (const ExperimentRecord& r : records) {
    if (r.failed) {
      ++s.failed;
      continue;
    }
    if (r.gap_seq && r.gap_opt) {
      gaps_seq.push_back(*r.gap_seq);
      gaps_opt.push_back(*r.gap_opt);
    }
    const auto key = std::make_pair(r.map_name, r.robots);
    auto it = row_of.find(key);
    if (it == row_of.end()) {
      it = row_of.emplace(key, s.runtimes.size()).first;
      s.runtimes.push_back({r.map_name, r.robots, 0, 0.0, 0.0});
      totals.emplace_back(0.0, 0.0);
    }
    RuntimeRow& row = s.runtimes[it->second];
    row.samples += 1;
    totals[it->second].first += r.runtime_seq;
    totals[it->second].second += r.runtime_opt;
  }
  for (std::size_t i = 0; i < s.runtimes.size(); ++i) {
    const auto n = static_cast<double>(s.runtimes[i].samples);
    s.runtimes[i].nonopt = totals[i].first / n;
    s.runtimes[i].opt = totals[i].second / n;
  }
  if (!gaps_seq.empty()) {
    OptimalityStats stats;
    stats.samples = gaps_seq.size();
    auto pct = [&](const std::vector<double>& gaps) {
      const auto hits = std::count_if(gaps.begin(), gaps.end(),
                                      [](double g) { return g <= kOptimalTolerance; });
      return 100.0 * static_cast<double>(hits) / static_cast<double>(gaps.size());
    };
    stats.pct_optimal_seq = pct(gaps_seq);
    stats.pct_optimal_opt = pct(gaps_opt);
    stats.gap_seq = distribution(gaps_seq);
    stats.gap_opt = distribution(gaps_opt);
    s.optimality = stats;
  }
  return s;
}

std::string records_to_json(std::span<const ExperimentRecord> records) {
  json out = json::array();
  for (const ExperimentRecord& r : records) {
    json j = {{"map", r.map_name},
              {"start", r.start},
              {"goal", r.goal},
              {"robots", r.robots},
              {"k", r.coefficient},
              {"roadmap_vertices", r.roadmap_vertices},
              {"failed", r.failed}};
    if (r.failed) {
      j["error"] = r.error;
    } else {
      j["seq_objective"] = r.seq_objective;
      j["opt_objective"] = r.opt_objective;
      j["runtime_seq"] = r.runtime_seq;
      j["runtime_opt"] = r.runtime_opt;
      j["oracle_status"] = r.oracle_status;
      j["oracle_objective"] = optional_number(r.oracle_objective);
      j["gap_seq"] = optional_number(r.gap_seq);
      j["gap_opt"] = optional_number(r.gap_opt);
    }
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string summary_to_json(const Summary& summary) {
  json runtime = json::array();
  for (const RuntimeRow& row : summary.runtimes) {
    runtime.push_back({{"map", row.map_name},
                       {"robots", row.robots},
                       {"samples", row.samples},
                       {"nonopt", row.nonopt},
                       {"opt", row.opt}});
  }
  json out = {{"records", summary.records}, {"failed", summary.failed}, {"runtime", runtime}};
  if (summary.optimality) {
    const OptimalityStats& o = *summary.optimality;
    out["optimality"] = {{"samples", o.samples},
                         {"pct_optimal_seq", o.pct_optimal_seq},
                         {"pct_optimal_opt", o.pct_optimal_opt},
                         {"gap_seq", distribution_json(o.gap_seq)},
                         {"gap_opt", distribution_json(o.gap_opt)}};
  } else {
    out["optimality"] = nullptr;
  }
  return out.dump(2) + "\n";
}

std::string summary_table(const Summary& summary) {
  std::ostringstream os;
  os << "records: " << summary.records << "  failed: " << summary.failed << "\n\n";
  if (summary.optimality) {
    const OptimalityStats& o = *summary.optimality;
    os << std::fixed << std::setprecision(1);
    os << "optimality over " << o.samples << " samples\n";
    os << "  variant   %optimal   gap mean   gap p50    gap p90    gap p95    gap max\n";
    auto line = [&](const char* name, double pct, const Distribution& d) {
      os << "  " << std::left << std::setw(8) << name << std::right << std::setw(9) << pct
         << std::setprecision(6) << std::setw(11) << d.mean << std::setw(11) << d.p50
         << std::setw(11) << d.p90 << std::setw(11) << d.p95 << std::setw(11) << d.max << "\n"
         << std::setprecision(1);
    };
    line("nonopt", o.pct_optimal_seq, o.gap_seq);
    line("opt", o.pct_optimal_opt, o.gap_opt);
    os << "\n";
  } else {
    os << "optimality: absent (no oracle results)\n\n";
  }
  std::size_t name_width = 3;
  for (const RuntimeRow& row : summary.runtimes) name_width = std::max(name_width, row.map_name.size());
  os << "runtime (mean seconds)\n";
  os << "  " << std::left << std::setw(static_cast<int>(name_width)) << "map" << std::right
     << std::setw(6) << "R" << std::setw(9) << "samples" << std::setw(14) << "nonopt"
     << std::setw(14) << "opt" << "\n";
  os << std::setprecision(6) << std::fixed;
  for (const RuntimeRow& row : summary.runtimes) {
    os << "  " << std::left << std::setw(static_cast<int>(name_width)) << row.map_name
       << std::right << std::setw(6) << row.robots << std::setw(9) << row.samples
       << std::setw(14) << row.nonopt << std::setw(14) << row.opt << "\n";
  }
  return os.str();
}

}  // namespace formplan
