#include "formplan/optimizer.hpp"

#include <algorithm>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

constexpr double kImprovementTolerance = 1e-9;

}  // namespace

double max_cost(const PathSet& set) {
  if (set.robot_costs.empty()) throw ValidationError("max_cost of an empty path set");
  return *std::max_element(set.robot_costs.begin(), set.robot_costs.end());
}

PathSet optimize_paths(const Roadmap& roadmap, const PathSet& set, const PlanQuery& query,
                       const OptimizerOptions& options,
                       std::vector<OptimizerDiagnostic>* diagnostics) {
  PathSet current = set;
  if (current.paths.empty()) return current;
  for (int round = 0; round < std::max(1, options.rounds); ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < current.paths.size(); ++i) {
      const double previous = max_cost(current);
      const Occupancy others = Occupancy::of(roadmap, current.paths, static_cast<int>(i));
      Path replacement;
      try {
        replacement = dijkstra_single(roadmap, others, query.start, query.goal);
      } catch (const PlanningError& err) {
        if (diagnostics) diagnostics->push_back({static_cast<int>(i), err.what()});
        continue;
      }
      if (replacement == current.paths[i]) continue;
      std::vector<Path> candidate_paths = current.paths;
      candidate_paths[i] = std::move(replacement);
      PathSet candidate = make_pathset(roadmap, std::move(candidate_paths));
      if (max_cost(candidate) < previous - kImprovementTolerance &&
          is_schedulable(candidate.paths)) {
        current = std::move(candidate);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return current;
}

PathSet plan_optimized(const Roadmap& roadmap, const PlanQuery& query,
                       const OptimizerOptions& options,
                       std::vector<OptimizerDiagnostic>* diagnostics) {
  validate(query, roadmap);
  PathSet current;
  for (int r = 0; r < query.robots; ++r) {
    const Occupancy occ = Occupancy::of(roadmap, current.paths);
    std::vector<Path> paths = current.paths;
    try {
      paths.push_back(dijkstra_single(roadmap, occ, query.start, query.goal));
    } catch (const PlanningError& err) {
      throw PlanningError(err.kind(), "robot " + std::to_string(r) + ": " + err.what(), r);
    }
    current = optimize_paths(roadmap, make_pathset(roadmap, std::move(paths)), query, options,
                             diagnostics);
  }
  if (!options.sequential_incumbent) return current;

  const PathSet sequential = plan_sequential(roadmap, query);
  if (max_cost(current) > max_cost(sequential) + kImprovementTolerance) {
    return optimize_paths(roadmap, sequential, query, options, diagnostics);
  }
  return current;
}

}  // namespace formplan
