#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "formplan/model.hpp"

namespace formplan {

/// Vertex sequence from the start vertex to the goal vertex.
using Path = std::vector<VertexId>;

/// Per-edge usage by already planned robots. "Forward" means traversal from
/// `Edge::u` to `Edge::v`.
class Occupancy {
 public:
  struct Use {
    int robot;
    bool forward;
  };

  Occupancy() = default;
  explicit Occupancy(std::size_t edge_count);

  /// Builds the occupancy of `paths`, leaving out index `skip` (if >= 0).
  static Occupancy of(const Roadmap& roadmap, std::span<const Path> paths, int skip = -1);

  /// Throws ValidationError if consecutive path vertices are not adjacent.
  void add(const Roadmap& roadmap, const Path& path, int robot);

  int forward(EdgeId e) const { return forward_[static_cast<std::size_t>(e)]; }
  int backward(EdgeId e) const { return backward_[static_cast<std::size_t>(e)]; }
  int count(EdgeId e) const { return forward(e) + backward(e); }
  std::span<const Use> users(EdgeId e) const { return users_[static_cast<std::size_t>(e)]; }
  std::size_t edge_count() const { return forward_.size(); }

 private:
  std::vector<int> forward_;
  std::vector<int> backward_;
  std::vector<std::vector<Use>> users_;
};

/// Robots that would share edge `e` when entering it from `from`: one plus
/// the prior same-direction users. nullopt means the edge is blocked because
/// a prior robot traverses it the other way.
std::optional<int> robots_in_segment(const Occupancy& occupancy, const Roadmap& roadmap,
                                     EdgeId e, VertexId from);

/// Label-setting search state. `prev[v] == -1` stands for "no predecessor".
struct SearchState {
  std::vector<double> cost;
  std::vector<VertexId> prev;
  std::vector<VertexId> settled;  // vertices in the order they left the queue
};

/// Dijkstra from `start` where edge (u,v) costs c^{r_uv} with r_uv taken from
/// robots_in_segment. Stops once `stop_at` is settled. Equal-cost
/// relaxations prefer the smaller predecessor id; the queue pops equal costs
/// in increasing vertex id.
SearchState run_search(const Roadmap& roadmap, const Occupancy& occupancy, VertexId start,
                       std::optional<VertexId> stop_at = std::nullopt);

/// Cheapest start->goal path against `occupancy`. Throws PlanningError with
/// kind GoalBlocked when only blocked edges lead to the goal, Disconnected
/// when the goal is unreachable in the bare graph.
Path dijkstra_single(const Roadmap& roadmap, const Occupancy& occupancy, VertexId start,
                     VertexId goal);

struct PlanCost {
  std::vector<double> robot_costs;
  double objective = 0.0;
};

/// Prices every robot at final occupancy: C_i = sum over edges e of p_i of
/// c^e_{n_e}, where n_e counts the robots whose path uses e.
PlanCost evaluate_plan(const Roadmap& roadmap, std::span<const Path> paths);

struct PathSet {
  std::vector<Path> paths;
  std::vector<double> robot_costs;
  Occupancy occupancy;
  double objective = 0.0;  // max over robot_costs

  std::size_t size() const { return paths.size(); }
};

/// Evaluates `paths` and packs them with their costs and occupancy.
PathSet make_pathset(const Roadmap& roadmap, std::vector<Path> paths);

/// Plans robots one after another, each against the occupancy of those
/// already planned, then prices the set at final occupancy.
PathSet plan_sequential(const Roadmap& roadmap, const PlanQuery& query);

struct Violation {
  int constraint = 0;  // 1..4
  int robot = -1;
  int other_robot = -1;
  VertexId from = -1;
  VertexId to = -1;
  std::string message;
};

/// Empty iff all four path constraints hold: common start (1), common goal
/// (2), no edge traversed in opposite directions by two robots (3), and a
/// wait-synchronized schedule exists (4).
std::vector<Violation> check_constraints(std::span<const Path> paths, const PlanQuery& query);

struct ScheduleEntry {
  VertexId vertex;
  int step;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Per robot, one entry per time step; a repeated vertex is a wait.
struct Schedule {
  std::vector<std::vector<ScheduleEntry>> robots;
  std::vector<std::vector<int>> arrivals;  // arrival step of each path position
  int k_min = 0;                           // common goal arrival step
};

/// Synchronizes arrivals at every vertex shared by two or more robots,
/// inserting waits just before the shared vertex. Throws ScheduleConflict
/// when the shared vertices are visited in cyclic order.
Schedule make_schedule(std::span<const Path> paths);

/// True when make_schedule would succeed.
bool is_schedulable(std::span<const Path> paths);

}  // namespace formplan
