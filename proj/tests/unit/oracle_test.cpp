#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "formplan/errors.hpp"
#include "formplan/optimizer.hpp"
#include "formplan/oracle.hpp"
#include "graphs.hpp"

namespace formplan {
namespace {

using testing::diamond;

TEST(EnumeratePaths, Diamond) {
  const auto paths = enumerate_simple_paths(diamond(), 0, 3, 100);
  EXPECT_EQ(paths, (std::vector<Path>{{0, 1, 3}, {0, 2, 3}}));
}

TEST(EnumeratePaths, DiamondWithChord) {
  const auto paths = enumerate_simple_paths(diamond(2, true), 0, 3, 100);
  EXPECT_EQ(paths, (std::vector<Path>{{0, 1, 2, 3}, {0, 1, 3}, {0, 2, 1, 3}, {0, 2, 3}}));
}

TEST(EnumeratePaths, LimitExceeded) {
  try {
    enumerate_simple_paths(diamond(), 0, 3, 1);
    FAIL();
  } catch (const OracleBudgetError& err) {
    EXPECT_GT(err.reached(), 1u);
  }
}

std::vector<Path> dfs_paths(const Roadmap& r, VertexId start, VertexId goal) {
  std::vector<Path> out;
  Path cur{start};
  std::vector<char> on(r.vertex_count(), 0);
  on[static_cast<std::size_t>(start)] = 1;
  std::function<void()> go = [&] {
    if (cur.back() == goal) {
      out.push_back(cur);
      return;
    }
    for (VertexId w = 0; w < static_cast<VertexId>(r.vertex_count()); ++w) {
      if (on[static_cast<std::size_t>(w)] || !r.find_edge(cur.back(), w)) continue;
      on[static_cast<std::size_t>(w)] = 1;
      cur.push_back(w);
      go();
      cur.pop_back();
      on[static_cast<std::size_t>(w)] = 0;
    }
  };
  go();
  return out;
}

TEST(EnumeratePaths, MatchesIndependentDfs) {
  testing::Rng rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.between(2, 9);
    const Roadmap r = testing::random_instance(rng, n, rng.between(0, n), 1);
    EXPECT_EQ(enumerate_simple_paths(r, 0, static_cast<VertexId>(n - 1), 1'000'000),
              dfs_paths(r, 0, static_cast<VertexId>(n - 1)));
  }
}

// Ordered R-tuples, constraint 3 and 4 filters, direct pricing.
double brute_force_optimum(const Roadmap& r, const PlanQuery& q) {
  const auto paths = dfs_paths(r, q.start, q.goal);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(static_cast<std::size_t>(q.robots), 0);
  while (true) {
    std::vector<Path> tuple;
    for (std::size_t i : pick) tuple.push_back(paths[i]);
    std::map<std::pair<VertexId, VertexId>, int> steps;
    std::map<EdgeId, int> users;
    for (const Path& p : tuple) {
      for (std::size_t m = 0; m + 1 < p.size(); ++m) {
        steps[{p[m], p[m + 1]}] += 1;
        users[*r.find_edge(p[m], p[m + 1])] += 1;
      }
    }
    bool opposite = false;
    for (const auto& [st, c] : steps) opposite = opposite || steps.count({st.second, st.first});
    if (!opposite && testing::reference_schedulable(tuple)) {
      double worst = 0.0;
      for (const Path& p : tuple) {
        double c = 0.0;
        for (std::size_t m = 0; m + 1 < p.size(); ++m) {
          const EdgeId e = *r.find_edge(p[m], p[m + 1]);
          c += r.edge(e).costs[static_cast<std::size_t>(users[e] - 1)];
        }
        worst = std::max(worst, c);
      }
      best = std::min(best, worst);
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == paths.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return best;
}

TEST(ExhaustiveOptimum, MatchesBruteForce) {
  testing::Rng rng(88);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = rng.between(3, 8);
    const int robots = rng.between(1, 3);
    const Roadmap r = testing::random_instance(rng, n, rng.between(1, n), robots);
    const PlanQuery q{0, static_cast<VertexId>(n - 1), robots, 100};
    const PathSet best = exhaustive_optimum(r, q);
    EXPECT_NEAR(best.objective, brute_force_optimum(r, q), 1e-9) << "trial " << trial;
    EXPECT_TRUE(check_constraints(best.paths, q).empty());
    EXPECT_LE(best.objective, plan_sequential(r, q).objective + 1e-9);
  }
}

TEST(ExhaustiveOptimum, PruningWithNonMonotoneCosts) {
  // Costs that drop with sharing disable bound pruning; results must not change.
  testing::Rng rng(89);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.between(3, 7);
    const testing::RandomGraph topo = testing::random_connected_topology(rng, n, n);
    const Roadmap r = testing::materialize(rng, topo, [&](std::size_t) {
      return CostVector{rng.uniform(1, 10), rng.uniform(1, 10), rng.uniform(1, 10)};
    });
    const PlanQuery q{0, static_cast<VertexId>(n - 1), 3, 100};
    EXPECT_NEAR(exhaustive_optimum(r, q).objective, brute_force_optimum(r, q), 1e-9);
  }
}

TEST(ExhaustiveOptimum, Diamond) {
  const PathSet best = exhaustive_optimum(diamond(), {0, 3, 2, 100});
  EXPECT_EQ(best.objective, 24);
}

TEST(ExhaustiveOptimum, SingleRouteIsShared) {
  RoadmapBuilder b;
  for (int i = 0; i < 3; ++i) b.add_vertex({double(i), 0}, 1);
  b.add_edge(0, 1, 1, 1, false, {3, 6});
  b.add_edge(1, 2, 1, 1, false, {4, 8});
  const PathSet best = exhaustive_optimum(std::move(b).build(), {0, 2, 2, 100});
  EXPECT_EQ(best.paths, (std::vector<Path>{{0, 1, 2}, {0, 1, 2}}));
  EXPECT_EQ(best.objective, 14);
}

TEST(ExhaustiveOptimum, SingleRobotIsDijkstra) {
  testing::Rng rng(90);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.between(2, 9);
    const Roadmap r = testing::random_instance(rng, n, rng.between(0, n), 1);
    const auto dist = testing::reference_distances(r, 0);
    const PathSet best = exhaustive_optimum(r, {0, static_cast<VertexId>(n - 1), 1, 100});
    EXPECT_NEAR(best.objective, dist.back(), 1e-9);
  }
}

TEST(ExhaustiveOptimum, Budgets) {
  const Roadmap r = diamond(3, true);
  OracleLimits few_paths;
  few_paths.max_simple_paths = 2;
  EXPECT_THROW(exhaustive_optimum(r, {0, 3, 3, 100}, few_paths), OracleBudgetError);
  OracleLimits few_combos;
  few_combos.max_combinations = 10;  // C(4 + 3 - 1, 3) = 20 multisets
  try {
    exhaustive_optimum(r, {0, 3, 3, 100}, few_combos);
    FAIL();
  } catch (const OracleBudgetError& err) {
    EXPECT_EQ(err.reached(), 20u);
  }
  few_combos.max_combinations = 20;
  EXPECT_NO_THROW(exhaustive_optimum(r, {0, 3, 3, 100}, few_combos));
}

TEST(Gap, Examples) {
  EXPECT_EQ(gap(100, 100), 0.0);
  EXPECT_EQ(gap(100 + 1e-12, 100), 0.0);
  EXPECT_NEAR(gap(418, 412), 0.0145631, 1e-6);
  EXPECT_DOUBLE_EQ(gap(150, 100), 0.5);
  EXPECT_THROW(gap(99, 100), InternalError);
  EXPECT_THROW(gap(5, 0), ValidationError);
}

}  // namespace
}  // namespace formplan
