#include "formplan/planner.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double edge_cost(const Edge& e, int robots) {
  if (e.is_virtual) return 0.0;
  if (robots < 1 || static_cast<std::size_t>(robots) > e.costs.size()) {
    throw PlanningError(PlanningError::Kind::CapacityExceeded,
                        "edge " + std::to_string(e.id) + " has cost capacity " +
                            std::to_string(e.costs.size()) + " but " + std::to_string(robots) +
                            " robots would use it");
  }
  return e.costs[static_cast<std::size_t>(robots - 1)];
}

bool reachable(const Roadmap& roadmap, VertexId from, VertexId to) {
  std::vector<char> seen(roadmap.vertex_count(), 0);
  std::vector<VertexId> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (const Incidence& inc : roadmap.neighbors(u)) {
      auto& flag = seen[static_cast<std::size_t>(inc.neighbor)];
      if (!flag) {
        flag = 1;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return false;
}

std::string join(const std::vector<VertexId>& ids) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " -> " : "") << ids[i];
  return out.str();
}

// Directed union of all path steps; a cycle here is exactly an unsatisfiable
// set of synchronization constraints.
std::vector<VertexId> find_order_cycle(std::span<const Path> paths) {
  std::map<VertexId, std::vector<VertexId>> succ;
  for (const Path& p : paths) {
    for (std::size_t m = 0; m + 1 < p.size(); ++m) succ[p[m]].push_back(p[m + 1]);
  }
  for (auto& [v, list] : succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::map<VertexId, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<VertexId> stack;
  std::vector<VertexId> cycle;
  std::function<bool(VertexId)> dfs = [&](VertexId u) {
    color[u] = 1;
    stack.push_back(u);
    if (auto it = succ.find(u); it != succ.end()) {
      for (VertexId w : it->second) {
        const int c = color[w];
        if (c == 1) {
          auto start = std::find(stack.begin(), stack.end(), w);
          cycle.assign(start, stack.end());
          cycle.push_back(w);
          return true;
        }
        if (c == 0 && dfs(w)) return true;
      }
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (const auto& [v, list] : succ) {
    if (color[v] == 0 && dfs(v)) break;
  }
  return cycle;
}

}  // namespace

Occupancy::Occupancy(std::size_t edge_count)
    : forward_(edge_count, 0), backward_(edge_count, 0), users_(edge_count) {}

Occupancy Occupancy::of(const Roadmap& roadmap, std::span<const Path> paths, int skip) {
  Occupancy occ(roadmap.edge_count());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    occ.add(roadmap, paths[i], static_cast<int>(i));
  }
  return occ;
}

void Occupancy::add(const Roadmap& roadmap, const Path& path, int robot) {
  for (std::size_t m = 0; m + 1 < path.size(); ++m) {
    const auto e = roadmap.find_edge(path[m], path[m + 1]);
    if (!e) {
      throw ValidationError("path of robot " + std::to_string(robot) + " steps from " +
                            std::to_string(path[m]) + " to non-adjacent " +
                            std::to_string(path[m + 1]));
    }
    const auto idx = static_cast<std::size_t>(*e);
    const bool fwd = roadmap.edge(*e).u == path[m];
    (fwd ? forward_ : backward_)[idx] += 1;
    users_[idx].push_back({robot, fwd});
  }
}

std::optional<int> robots_in_segment(const Occupancy& occupancy, const Roadmap& roadmap,
                                     EdgeId e, VertexId from) {
  const bool fwd = roadmap.edge(e).u == from;
  const int same = fwd ? occupancy.forward(e) : occupancy.backward(e);
  const int opposite = fwd ? occupancy.backward(e) : occupancy.forward(e);
  if (opposite > 0) return std::nullopt;
  return same + 1;
}

SearchState run_search(const Roadmap& roadmap, const Occupancy& occupancy, VertexId start,
                       std::optional<VertexId> stop_at) {
  const std::size_t n = roadmap.vertex_count();
  SearchState state;
  state.cost.assign(n, kInfinity);
  state.prev.assign(n, -1);
  std::vector<char> done(n, 0);

  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  state.cost[static_cast<std::size_t>(start)] = 0.0;
  queue.emplace(0.0, start);

  while (!queue.empty()) {
    const auto [cu, u] = queue.top();
    queue.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui] || cu != state.cost[ui]) continue;
    done[ui] = 1;
    state.settled.push_back(u);
    if (stop_at && u == *stop_at) break;

    for (const Incidence& inc : roadmap.neighbors(u)) {
      const auto vi = static_cast<std::size_t>(inc.neighbor);
      if (done[vi]) continue;
      const auto robots = robots_in_segment(occupancy, roadmap, inc.edge, u);
      if (!robots) continue;
      const double candidate = cu + edge_cost(roadmap.edge(inc.edge), *robots);
      if (candidate < state.cost[vi]) {
        state.cost[vi] = candidate;
        state.prev[vi] = u;
        queue.emplace(candidate, inc.neighbor);
      } else if (candidate == state.cost[vi] && u < state.prev[vi]) {
        state.prev[vi] = u;
      }
    }
  }
  return state;
}

Path dijkstra_single(const Roadmap& roadmap, const Occupancy& occupancy, VertexId start,
                     VertexId goal) {
  if (!roadmap.contains(start) || !roadmap.contains(goal)) {
    throw ValidationError("search endpoints must be roadmap vertices");
  }
  const SearchState state = run_search(roadmap, occupancy, start, goal);
  if (state.cost[static_cast<std::size_t>(goal)] == kInfinity) {
    if (reachable(roadmap, start, goal)) {
      throw PlanningError(PlanningError::Kind::GoalBlocked,
                          "goal " + std::to_string(goal) +
                              " is only reachable through edges used in the opposite direction");
    }
    throw PlanningError(PlanningError::Kind::Disconnected,
                        "goal " + std::to_string(goal) + " is not connected to start " +
                            std::to_string(start));
  }
  Path path;
  for (VertexId v = goal; v != -1; v = state.prev[static_cast<std::size_t>(v)]) {
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

PlanCost evaluate_plan(const Roadmap& roadmap, std::span<const Path> paths) {
  const Occupancy occ = Occupancy::of(roadmap, paths);
  PlanCost result;
  result.robot_costs.reserve(paths.size());
  for (const Path& p : paths) {
    double total = 0.0;
    for (std::size_t m = 0; m + 1 < p.size(); ++m) {
      const EdgeId e = *roadmap.find_edge(p[m], p[m + 1]);
      total += edge_cost(roadmap.edge(e), occ.count(e));
    }
    result.robot_costs.push_back(total);
  }
  result.objective = result.robot_costs.empty()
                         ? 0.0
                         : *std::max_element(result.robot_costs.begin(), result.robot_costs.end());
  return result;
}

PathSet make_pathset(const Roadmap& roadmap, std::vector<Path> paths) {
  PathSet set;
  PlanCost cost = evaluate_plan(roadmap, paths);
  set.occupancy = Occupancy::of(roadmap, paths);
  set.paths = std::move(paths);
  set.robot_costs = std::move(cost.robot_costs);
  set.objective = cost.objective;
  return set;
}

PathSet plan_sequential(const Roadmap& roadmap, const PlanQuery& query) {
  validate(query, roadmap);
  std::vector<Path> paths;
  paths.reserve(static_cast<std::size_t>(query.robots));
  Occupancy occ(roadmap.edge_count());
  for (int r = 0; r < query.robots; ++r) {
    try {
      paths.push_back(dijkstra_single(roadmap, occ, query.start, query.goal));
    } catch (const PlanningError& err) {
      throw PlanningError(err.kind(), "robot " + std::to_string(r) + ": " + err.what(), r);
    }
    occ.add(roadmap, paths.back(), r);
  }
  return make_pathset(roadmap, std::move(paths));
}

std::vector<Violation> check_constraints(std::span<const Path> paths, const PlanQuery& query) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const int r = static_cast<int>(i);
    if (paths[i].empty() || paths[i].front() != query.start) {
      out.push_back({1, r, -1, -1, -1,
                     "robot " + std::to_string(r) + " does not start at " +
                         std::to_string(query.start)});
    }
    if (paths[i].empty() || paths[i].back() != query.goal) {
      out.push_back({2, r, -1, -1, -1,
                     "robot " + std::to_string(r) + " does not end at " +
                         std::to_string(query.goal)});
    }
  }

  std::map<std::pair<VertexId, VertexId>, std::vector<int>> users;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t m = 0; m + 1 < paths[i].size(); ++m) {
      auto& list = users[{paths[i][m], paths[i][m + 1]}];
      if (list.empty() || list.back() != static_cast<int>(i)) list.push_back(static_cast<int>(i));
    }
  }
  for (const auto& [step, robots] : users) {
    const auto& [a, b] = step;
    if (a > b) continue;  // each unordered pair once
    auto opposite = users.find({b, a});
    if (opposite == users.end()) continue;
    for (int i : robots) {
      for (int j : opposite->second) {
        if (i == j) continue;
        out.push_back({3, i, j, a, b,
                       "robots " + std::to_string(i) + " and " + std::to_string(j) +
                           " traverse edge " + std::to_string(a) + "-" + std::to_string(b) +
                           " in opposite directions"});
      }
    }
  }

  try {
    make_schedule(paths);
  } catch (const ScheduleConflict& conflict) {
    out.push_back({4, -1, -1, -1, -1, conflict.what()});
  }
  return out;
}

Schedule make_schedule(std::span<const Path> paths) {
  Schedule schedule;
  schedule.arrivals.resize(paths.size());
  std::size_t total = 0;
  std::map<VertexId, std::vector<std::pair<std::size_t, std::size_t>>> visits;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    auto& steps = schedule.arrivals[i];
    steps.resize(paths[i].size());
    for (std::size_t m = 0; m < paths[i].size(); ++m) {
      steps[m] = static_cast<int>(m);
      visits[paths[i][m]].emplace_back(i, m);
    }
    total += paths[i].size();
  }
  std::vector<const std::vector<std::pair<std::size_t, std::size_t>>*> shared;
  for (const auto& [v, list] : visits) {
    const bool several_robots = std::any_of(list.begin(), list.end(), [&](const auto& occ) {
      return occ.first != list.front().first;
    });
    if (several_robots) shared.push_back(&list);
  }

  // Least fixpoint: raise every shared visit to the latest arrival, then push
  // later steps of the same robot forward. Any step past `total` means the
  // raising never settles.
  const int bound = static_cast<int>(total);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* list : shared) {
      int latest = 0;
      for (const auto& [i, m] : *list) latest = std::max(latest, schedule.arrivals[i][m]);
      for (const auto& [i, m] : *list) {
        auto& steps = schedule.arrivals[i];
        if (steps[m] >= latest) continue;
        steps[m] = latest;
        for (std::size_t k = m + 1; k < steps.size() && steps[k] <= steps[k - 1]; ++k) {
          steps[k] = steps[k - 1] + 1;
        }
        changed = true;
        if (steps.back() > bound) {
          auto cycle = find_order_cycle(paths);
          throw ScheduleConflict("shared vertices are visited in cyclic order: " + join(cycle),
                                 std::move(cycle));
        }
      }
    }
  }

  schedule.robots.resize(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& steps = schedule.arrivals[i];
    auto& entries = schedule.robots[i];
    for (std::size_t m = 0; m < paths[i].size(); ++m) {
      if (m > 0) {
        for (int t = steps[m - 1] + 1; t < steps[m]; ++t) entries.push_back({paths[i][m - 1], t});
      }
      entries.push_back({paths[i][m], steps[m]});
    }
    if (!steps.empty()) schedule.k_min = std::max(schedule.k_min, steps.back());
  }
  return schedule;
}

bool is_schedulable(std::span<const Path> paths) {
  try {
    make_schedule(paths);
    return true;
  } catch (const ScheduleConflict&) {
    return false;
  }
}

}  // namespace formplan
