#pragma once

#include <cstdint>
#include <vector>

#include "formplan/planner.hpp"

namespace formplan {

/// Budgets that keep exhaustive search from running away.
struct OracleLimits {
  std::uint64_t max_simple_paths = 20000;
  std::uint64_t max_combinations = 50'000'000;
};

/// All simple start->goal paths in lexicographic vertex-id order. Throws
/// OracleBudgetError as soon as more than `limit` paths exist.
std::vector<Path> enumerate_simple_paths(const Roadmap& roadmap, VertexId start, VertexId goal,
                                         std::uint64_t limit);

/// Certified optimum over every multiset of R simple paths: tuples using an
/// edge in both directions or lacking a wait-synchronized schedule are
/// discarded; the rest are priced at final occupancy and ranked by max cost,
/// then total cost, then lexicographic path order.
///
/// Robots are interchangeable, so only nondecreasing path-index tuples are
/// enumerated; the budget check applies to that multiset count.
PathSet exhaustive_optimum(const Roadmap& roadmap, const PlanQuery& query,
                           const OracleLimits& limits = {});

/// Relative excess (c - c_opt) / c_opt, clamped to 0 when |c - c_opt| <= 1e-9.
/// Throws InternalError when c is below c_opt beyond that tolerance, and
/// ValidationError when c_opt is not positive.
double gap(double cost, double optimum);

}  // namespace formplan
