#pragma once

#include <string>
#include <vector>

#include "formplan/planner.hpp"

namespace formplan {

/// Largest per-robot cost of the set. Throws ValidationError when empty.
double max_cost(const PathSet& set);

struct OptimizerOptions {
  /// Improvement sweeps after each added robot. One sweep is the reference
  /// behaviour; more are available for experiments.
  int rounds = 1;
  /// plan_optimized also plans the plain sequential set and, if the
  /// interleaved result ends up more expensive, returns an improvement sweep
  /// over the sequential set instead. Keeps plan_optimized <= plan_sequential.
  bool sequential_incumbent = true;
};

/// Note left by optimize_paths when it had to skip a re-plan.
struct OptimizerDiagnostic {
  int robot = -1;
  std::string message;
};

/// Re-plans each path in turn against the others and adopts the candidate
/// set only when it lowers max_cost by more than 1e-9 and stays schedulable.
/// Never increases max_cost.
PathSet optimize_paths(const Roadmap& roadmap, const PathSet& set, const PlanQuery& query,
                       const OptimizerOptions& options = {},
                       std::vector<OptimizerDiagnostic>* diagnostics = nullptr);

/// Sequential planning with an improvement pass after every added robot.
/// Interleaving can steer early robots into a worse final set than plain
/// sequential planning; see OptimizerOptions::sequential_incumbent.
PathSet plan_optimized(const Roadmap& roadmap, const PlanQuery& query,
                       const OptimizerOptions& options = {},
                       std::vector<OptimizerDiagnostic>* diagnostics = nullptr);

}  // namespace formplan
