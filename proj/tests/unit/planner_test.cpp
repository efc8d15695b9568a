#include <gtest/gtest.h>

#include <map>

#include "formplan/errors.hpp"
#include "formplan/planner.hpp"
#include "graphs.hpp"

namespace formplan {
namespace {

using testing::diamond;

constexpr VertexId s = 0, a = 1, b = 2, g = 3;

double path_cost_c1(const Roadmap& r, const Path& p) {
  double total = 0.0;
  for (std::size_t m = 0; m + 1 < p.size(); ++m) {
    const Edge& e = r.edge(*r.find_edge(p[m], p[m + 1]));
    total += e.is_virtual ? 0.0 : e.costs[0];
  }
  return total;
}

Roadmap line(std::vector<CostVector> costs) {
  RoadmapBuilder bld;
  for (std::size_t i = 0; i <= costs.size(); ++i) bld.add_vertex({double(i), 0}, 1);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    bld.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 1, 1, false, costs[i]);
  }
  return std::move(bld).build();
}

// ------------------------------------------------------- robots_in_segment

TEST(RobotsInSegment, Examples) {
  const Roadmap r = diamond(3);
  const EdgeId sa = *r.find_edge(s, a);
  EXPECT_EQ(robots_in_segment(Occupancy(r.edge_count()), r, sa, s), 1);

  Occupancy two(r.edge_count());
  two.add(r, {s, a, g}, 0);
  two.add(r, {s, a, g}, 1);
  EXPECT_EQ(robots_in_segment(two, r, sa, s), 3);

  Occupancy one(r.edge_count());
  one.add(r, {s, a, g}, 0);
  EXPECT_EQ(robots_in_segment(one, r, sa, a), std::nullopt);
}

TEST(Occupancy, CountsDirectionsAndRejectsGaps) {
  const Roadmap r = diamond();
  const std::vector<Path> paths{{s, a, g}, {s, b, g}, {s, a, g}};
  const Occupancy occ = Occupancy::of(r, paths);
  const EdgeId sa = *r.find_edge(s, a);
  EXPECT_EQ(occ.forward(sa), 2);
  EXPECT_EQ(occ.backward(sa), 0);
  EXPECT_EQ(occ.users(sa).size(), 2u);
  EXPECT_EQ(Occupancy::of(r, paths, 0).count(sa), 1);
  Occupancy bad(r.edge_count());
  EXPECT_THROW(bad.add(r, {s, g}, 0), ValidationError);
}

// ------------------------------------------------------------ dijkstra_single

TEST(Dijkstra, EmptyOccupancyMatchesTextbook) {
  testing::Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.between(2, 40);
    const Roadmap r = testing::random_instance(rng, n, rng.between(0, 2 * n), 2);
    const auto dist = testing::reference_distances(r, 0);
    const VertexId goal = static_cast<VertexId>(rng.between(1, n - 1));
    const Path p = dijkstra_single(r, Occupancy(r.edge_count()), 0, goal);
    ASSERT_EQ(p.front(), 0);
    ASSERT_EQ(p.back(), goal);
    EXPECT_EQ(path_cost_c1(r, p), dist[static_cast<std::size_t>(goal)]);
  }
}

TEST(Dijkstra, DiamondAvoidsSharedRoute) {
  const Roadmap r = diamond();
  Occupancy occ(r.edge_count());
  occ.add(r, {s, a, g}, 0);
  EXPECT_EQ(dijkstra_single(r, occ, s, g), (Path{s, b, g}));
  EXPECT_EQ(dijkstra_single(r, Occupancy(r.edge_count()), s, g), (Path{s, a, g}));
}

TEST(Dijkstra, TiesPreferSmallerPredecessor) {
  RoadmapBuilder bld;
  for (int i = 0; i < 4; ++i) bld.add_vertex({double(i), 0}, 1);
  bld.add_edge(0, 2, 1, 1, false, {1});
  bld.add_edge(2, 3, 1, 1, false, {1});
  bld.add_edge(0, 1, 1, 1, false, {1});
  bld.add_edge(1, 3, 1, 1, false, {1});
  EXPECT_EQ(dijkstra_single(std::move(bld).build(), Occupancy(4), 0, 3), (Path{0, 1, 3}));
}

TEST(Dijkstra, BlockedVersusDisconnected) {
  const Roadmap r = line({{1, 2}, {1, 2}});
  Occupancy occ(r.edge_count());
  occ.add(r, {2, 1, 0}, 0);
  try {
    dijkstra_single(r, occ, 0, 2);
    FAIL();
  } catch (const PlanningError& err) {
    EXPECT_EQ(err.kind(), PlanningError::Kind::GoalBlocked);
  }

  RoadmapBuilder bld;
  for (int i = 0; i < 4; ++i) bld.add_vertex({double(i), 0}, 1);
  bld.add_edge(0, 1, 1, 1, false, {1});
  bld.add_edge(2, 3, 1, 1, false, {1});
  try {
    dijkstra_single(std::move(bld).build(), Occupancy(2), 0, 3);
    FAIL();
  } catch (const PlanningError& err) {
    EXPECT_EQ(err.kind(), PlanningError::Kind::Disconnected);
  }
}

TEST(Dijkstra, NeverUsesBlockedEdges) {
  testing::Rng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.between(3, 20);
    const Roadmap r = testing::random_instance(rng, n, rng.between(1, n), 4);
    Occupancy occ(r.edge_count());
    for (int k = 0; k < 2; ++k) {
      const auto u = static_cast<VertexId>(rng.between(0, n - 1));
      const auto v = static_cast<VertexId>(rng.between(0, n - 1));
      if (u == v) continue;
      try {
        occ.add(r, dijkstra_single(r, Occupancy(r.edge_count()), u, v), k);
      } catch (const PlanningError&) {
      }
    }
    Path p;
    try {
      p = dijkstra_single(r, occ, 0, static_cast<VertexId>(n - 1));
    } catch (const PlanningError& err) {
      EXPECT_EQ(err.kind(), PlanningError::Kind::GoalBlocked);
      continue;
    }
    for (std::size_t m = 0; m + 1 < p.size(); ++m) {
      const EdgeId e = *r.find_edge(p[m], p[m + 1]);
      EXPECT_TRUE(robots_in_segment(occ, r, e, p[m]).has_value());
    }
  }
}

// ---------------------------------------------------------- plan_sequential

TEST(PlanSequential, SingleRobotIsDijkstra) {
  const Roadmap r = diamond(1);
  const PathSet set = plan_sequential(r, {s, g, 1, 100});
  EXPECT_EQ(set.paths, (std::vector<Path>{{s, a, g}}));
  EXPECT_DOUBLE_EQ(set.objective, 20.0);
}

TEST(PlanSequential, DiamondTwoRobots) {
  const PathSet set = plan_sequential(diamond(), {s, g, 2, 100});
  EXPECT_EQ(set.paths, (std::vector<Path>{{s, a, g}, {s, b, g}}));
  EXPECT_EQ(set.robot_costs, (std::vector<double>{20, 24}));
  EXPECT_DOUBLE_EQ(set.objective, 24.0);
}

TEST(PlanSequential, FreeSharingKeepsOnePath) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.between(2, 20);
    const testing::RandomGraph topo = testing::random_connected_topology(rng, n, n);
    const Roadmap r = testing::materialize(rng, topo, [&](std::size_t) {
      const double c = rng.uniform(1, 10);
      return CostVector{c, c, c};
    });
    const VertexId goal = static_cast<VertexId>(n - 1);
    const PathSet set = plan_sequential(r, {0, goal, 3, 0});
    const Path solo = dijkstra_single(r, Occupancy(r.edge_count()), 0, goal);
    for (const Path& p : set.paths) EXPECT_EQ(p, solo);
  }
}

TEST(PlanSequential, FailureNamesTheRobot) {
  const Roadmap r = line({{1, 2, 3}, {1, 2, 3}});
  try {
    plan_sequential(r, {0, 2, 3, 100});
  } catch (...) {
    FAIL() << "a line admits any number of same-direction robots";
  }
  RoadmapBuilder bld;
  for (int i = 0; i < 3; ++i) bld.add_vertex({double(i), 0}, 1);
  bld.add_edge(0, 1, 1, 1, false, {1});
  try {
    plan_sequential(std::move(bld).build(), {0, 2, 1, 0});
    FAIL();
  } catch (const PlanningError& err) {
    EXPECT_EQ(err.robot(), 0);
    EXPECT_EQ(err.kind(), PlanningError::Kind::Disconnected);
  }
}

TEST(PlanSequential, DeterministicPrefixStableAndMonotone) {
  testing::Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.between(3, 25);
    const Roadmap r = testing::random_instance(rng, n, rng.between(1, 2 * n), 4);
    const PlanQuery q3{0, static_cast<VertexId>(n - 1), 3, 100};
    const PlanQuery q4{0, static_cast<VertexId>(n - 1), 4, 100};
    const PathSet first = plan_sequential(r, q3);
    const PathSet again = plan_sequential(r, q3);
    EXPECT_EQ(first.paths, again.paths);
    EXPECT_EQ(first.robot_costs, again.robot_costs);
    const PathSet more = plan_sequential(r, q4);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(more.paths[i], first.paths[i]);
      // An extra robot can only raise the others' final prices.
      EXPECT_GE(more.robot_costs[i], first.robot_costs[i]);
    }
    EXPECT_TRUE(check_constraints(more.paths, q4).empty());
  }
}

// ------------------------------------------------------------ evaluate_plan

TEST(EvaluatePlan, Examples) {
  const Roadmap solo = line({{5, 50}, {7, 70}});
  EXPECT_DOUBLE_EQ(evaluate_plan(solo, std::vector<Path>{{0, 1, 2}}).objective, 12.0);

  const Roadmap shared = line({{1, 10}, {1, 10}});
  const PlanCost both = evaluate_plan(shared, std::vector<Path>{{0, 1, 2}, {0, 1, 2}});
  EXPECT_EQ(both.robot_costs, (std::vector<double>{20, 20}));

  const PlanCost d = evaluate_plan(diamond(), std::vector<Path>{{s, a, g}, {s, b, g}});
  EXPECT_EQ(d.robot_costs, (std::vector<double>{20, 24}));
  EXPECT_DOUBLE_EQ(d.objective, 24.0);
}

TEST(EvaluatePlan, CapacityExceeded) {
  try {
    evaluate_plan(diamond(2), std::vector<Path>(3, Path{s, a, g}));
    FAIL();
  } catch (const PlanningError& err) {
    EXPECT_EQ(err.kind(), PlanningError::Kind::CapacityExceeded);
  }
}

TEST(EvaluatePlan, MatchesDirectSummation) {
  testing::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.between(3, 15);
    const Roadmap r = testing::random_instance(rng, n, n, 3);
    const PathSet set = plan_sequential(r, {0, static_cast<VertexId>(n - 1), 3, 100});
    std::map<EdgeId, int> users;
    for (const Path& p : set.paths) {
      for (std::size_t m = 0; m + 1 < p.size(); ++m) users[*r.find_edge(p[m], p[m + 1])] += 1;
    }
    for (std::size_t i = 0; i < set.paths.size(); ++i) {
      double expected = 0.0;
      const Path& p = set.paths[i];
      for (std::size_t m = 0; m + 1 < p.size(); ++m) {
        const EdgeId e = *r.find_edge(p[m], p[m + 1]);
        expected += r.edge(e).costs[static_cast<std::size_t>(users[e] - 1)];
      }
      EXPECT_DOUBLE_EQ(set.robot_costs[i], expected);
    }
  }
}

// -------------------------------------------------------- check_constraints

TEST(CheckConstraints, ValidDiamondPlan) {
  EXPECT_TRUE(check_constraints(std::vector<Path>{{s, a, g}, {s, b, g}}, {s, g, 2, 100}).empty());
}

TEST(CheckConstraints, OppositeTraversalNamesBothRobots) {
  const auto v = check_constraints(std::vector<Path>{{s, a, b, g}, {s, b, a, g}}, {s, g, 2, 100});
  bool found = false;
  for (const Violation& x : v) {
    if (x.constraint != 3) continue;
    found = true;
    EXPECT_EQ(std::min(x.robot, x.other_robot), 0);
    EXPECT_EQ(std::max(x.robot, x.other_robot), 1);
    EXPECT_EQ(std::min(x.from, x.to), a);
    EXPECT_EQ(std::max(x.from, x.to), b);
  }
  EXPECT_TRUE(found);
}

TEST(CheckConstraints, WrongStartAndGoal) {
  const auto v = check_constraints(std::vector<Path>{{a, g}, {s, a}}, {s, g, 2, 100});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].constraint, 1);
  EXPECT_EQ(v[0].robot, 0);
  EXPECT_EQ(v[1].constraint, 2);
  EXPECT_EQ(v[1].robot, 1);
}

// ------------------------------------------------------------ make_schedule

TEST(Schedule, DisjointInteriors) {
  const Schedule sch = make_schedule(std::vector<Path>{{s, a, g}, {s, b, g}});
  EXPECT_EQ(sch.k_min, 2);
  EXPECT_EQ(sch.arrivals, (std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 2}}));
}

TEST(Schedule, SharedGoalForcesAWait) {
  const Schedule sch = make_schedule(std::vector<Path>{{s, a, g}, {s, a, b, g}});
  EXPECT_EQ(sch.k_min, 3);
  EXPECT_EQ(sch.arrivals[0], (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(sch.arrivals[1], (std::vector<int>{0, 1, 2, 3}));
  const std::vector<ScheduleEntry> waits{{s, 0}, {a, 1}, {a, 2}, {g, 3}};
  EXPECT_EQ(sch.robots[0], waits);
}

TEST(Schedule, OppositeOrderIsAConflict) {
  // 4-cycle s-x-g-y with chord x-y.
  const VertexId x = 1, y = 2;
  try {
    make_schedule(std::vector<Path>{{s, x, y, g}, {s, y, x, g}});
    FAIL();
  } catch (const ScheduleConflict& conflict) {
    std::set<VertexId> cycle(conflict.cycle().begin(), conflict.cycle().end());
    EXPECT_TRUE(cycle.count(x));
    EXPECT_TRUE(cycle.count(y));
  }
}

std::map<VertexId, int> reference_steps(std::span<const Path> paths) {
  // Longest path into each vertex over the directed union of path steps.
  std::map<VertexId, int> step;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Path& p : paths) {
      for (std::size_t m = 0; m < p.size(); ++m) {
        const int want = m == 0 ? 0 : step[p[m - 1]] + 1;
        auto [it, fresh] = step.emplace(p[m], want);
        if (fresh || it->second < want) {
          it->second = want;
          changed = true;
        }
      }
    }
  }
  return step;
}

TEST(Schedule, RandomPathsAgreeWithReference) {
  testing::Rng rng(2024);
  int schedulable = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = rng.between(3, 9);
    const int robots = rng.between(1, 4);
    std::vector<Path> paths;
    for (int i = 0; i < robots; ++i) {
      std::vector<VertexId> interior;
      for (VertexId v = 1; v < n - 1; ++v) {
        if (rng.chance(0.4)) interior.push_back(v);
      }
      for (std::size_t k = interior.size(); k > 1; --k) {
        std::swap(interior[k - 1], interior[static_cast<std::size_t>(rng.between(0, int(k) - 1))]);
      }
      Path p{0};
      p.insert(p.end(), interior.begin(), interior.end());
      p.push_back(static_cast<VertexId>(n - 1));
      paths.push_back(p);
    }
    const bool expected = testing::reference_schedulable(paths);
    ASSERT_EQ(is_schedulable(paths), expected) << "trial " << trial;
    if (!expected) {
      EXPECT_THROW(make_schedule(paths), ScheduleConflict);
      continue;
    }
    ++schedulable;
    const Schedule sch = make_schedule(paths);
    const auto ref = reference_steps(paths);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t m = 0; m < paths[i].size(); ++m) {
        ASSERT_EQ(sch.arrivals[i][m], ref.at(paths[i][m]));
      }
      // One entry per step, consecutive entries either wait or move.
      const auto& entries = sch.robots[i];
      for (std::size_t t = 0; t < entries.size(); ++t) EXPECT_EQ(entries[t].step, int(t));
      EXPECT_EQ(entries.back().step, sch.arrivals[i].back());
    }
    EXPECT_EQ(sch.k_min, ref.at(static_cast<VertexId>(n - 1)));
  }
  EXPECT_GT(schedulable, 100);
}

}  // namespace
}  // namespace formplan
