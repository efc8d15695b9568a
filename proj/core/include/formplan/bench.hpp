#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formplan/map_gen.hpp"
#include "formplan/model.hpp"
#include "formplan/oracle.hpp"
#include "formplan/roadmap.hpp"

namespace formplan {

/// One (map, start, goal, R, k) run.
struct ExperimentRecord {
  std::string map_name;
  VertexId start = -1;
  VertexId goal = -1;
  int robots = 0;
  double coefficient = 0.0;
  std::size_t roadmap_vertices = 0;

  bool failed = false;
  std::string error;

  double seq_objective = 0.0;
  double opt_objective = 0.0;
  double runtime_seq = 0.0;  // seconds, planning call only
  double runtime_opt = 0.0;

  /// "disabled", "ok", "budget" (limits hit) or "infeasible".
  std::string oracle_status = "disabled";
  std::optional<double> oracle_objective;
  std::optional<double> gap_seq;
  std::optional<double> gap_opt;
};

/// Where a benchmark map comes from: a map file, a ready roadmap file, or a
/// generator call.
struct MapSpec {
  std::string label;
  std::string map_file;
  std::string roadmap_file;
  std::string kind;
  MapGenParams params;
  std::uint64_t seed = 0;
};

struct BenchConfig {
  RoadmapBuildParams build;
  std::vector<MapSpec> maps;
  std::vector<int> robots{1};
  std::vector<double> coefficients{100.0};
  /// Default: lexicographic corner vertices.
  std::optional<std::pair<Point, Point>> terminal_points;
  std::optional<std::pair<VertexId, VertexId>> terminal_ids;
  bool oracle = false;
  OracleLimits limits;
  int opt_rounds = 1;
  std::string records_path;
  std::string summary_path;
  std::string table_path;
};

/// Relative file names in the config are resolved against `base_dir`.
BenchConfig parse_bench_config(std::string_view text, const std::string& base_dir = "");

/// Runs every (map, R, k) combination in config order. Failures are kept as
/// records with `failed` set; the batch carries on.
std::vector<ExperimentRecord> run_benchmark(const BenchConfig& config);

struct Distribution {
  double mean = 0.0;
  double max = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double p95 = 0.0;
};

struct OptimalityStats {
  std::size_t samples = 0;
  double pct_optimal_seq = 0.0;
  double pct_optimal_opt = 0.0;
  Distribution gap_seq;
  Distribution gap_opt;
};

struct RuntimeRow {
  std::string map_name;
  int robots = 0;
  std::size_t samples = 0;
  double nonopt = 0.0;  // mean seconds
  double opt = 0.0;
};

struct Summary {
  std::size_t records = 0;
  std::size_t failed = 0;
  std::optional<OptimalityStats> optimality;  // absent when no record has an oracle result
  std::vector<RuntimeRow> runtimes;           // grouped by (map, R), first-seen order
};

/// Throws ValidationError on an empty record list.
Summary summarize(std::span<const ExperimentRecord> records);

std::string records_to_json(std::span<const ExperimentRecord> records);
std::string summary_to_json(const Summary& summary);
std::string summary_table(const Summary& summary);

}  // namespace formplan
