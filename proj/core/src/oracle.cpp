#include "formplan/oracle.hpp"

#include <cmath>
#include <limits>

#include "formplan/errors.hpp"

namespace formplan {

namespace {

constexpr double kTolerance = 1e-9;

struct Step {
  std::size_t edge;
  bool forward;
};

// C(n + r - 1, r), saturating at uint64 max.
std::uint64_t multiset_count(std::uint64_t n, int r) {
  if (n == 0) return 0;
  long double acc = 1.0L;
  for (int i = 1; i <= r; ++i) {
    acc = acc * static_cast<long double>(n + static_cast<std::uint64_t>(i) - 1) / i;
    if (acc > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

bool costs_nondecreasing(const Roadmap& roadmap) {
  for (const Edge& e : roadmap.edges()) {
    for (std::size_t r = 1; r < e.costs.size(); ++r) {
      if (e.costs[r] < e.costs[r - 1]) return false;
    }
  }
  return true;
}

class TupleSearch {
 public:
  TupleSearch(const Roadmap& roadmap, const std::vector<Path>& paths, int robots)
      : roadmap_(roadmap),
        paths_(paths),
        robots_(robots),
        monotone_(costs_nondecreasing(roadmap)),
        forward_(roadmap.edge_count(), 0),
        backward_(roadmap.edge_count(), 0) {
    steps_.reserve(paths.size());
    for (const Path& p : paths) {
      std::vector<Step> steps;
      for (std::size_t m = 0; m + 1 < p.size(); ++m) {
        const EdgeId e = *roadmap.find_edge(p[m], p[m + 1]);
        steps.push_back({static_cast<std::size_t>(e), roadmap.edge(e).u == p[m]});
      }
      steps_.push_back(std::move(steps));
    }
  }

  bool run() {
    chosen_.clear();
    descend(0);
    return found_;
  }

  const std::vector<std::size_t>& best() const { return best_; }

 private:
  double price(std::size_t path_index) const {
    double total = 0.0;
    for (const Step& s : steps_[path_index]) {
      const Edge& e = roadmap_.edge(static_cast<EdgeId>(s.edge));
      if (e.is_virtual) continue;
      const int n = forward_[s.edge] + backward_[s.edge];
      total += e.costs[static_cast<std::size_t>(n - 1)];
    }
    return total;
  }

  bool push(std::size_t path_index) {
    const auto& steps = steps_[path_index];
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const Step& s = steps[k];
      if ((s.forward ? backward_ : forward_)[s.edge] > 0) {
        for (std::size_t undo = 0; undo < k; ++undo) {
          const Step& u = steps[undo];
          (u.forward ? forward_ : backward_)[u.edge] -= 1;
        }
        return false;
      }
      (s.forward ? forward_ : backward_)[s.edge] += 1;
    }
    chosen_.push_back(path_index);
    return true;
  }

  void pop() {
    for (const Step& s : steps_[chosen_.back()]) (s.forward ? forward_ : backward_)[s.edge] -= 1;
    chosen_.pop_back();
  }

  void descend(std::size_t first) {
    if (static_cast<int>(chosen_.size()) == robots_) {
      evaluate_leaf();
      return;
    }
    for (std::size_t p = first; p < paths_.size(); ++p) {
      if (!push(p)) continue;
      bool prune = false;
      if (found_ && monotone_) {
        // Adding robots never lowers anyone's cost, so the current maximum
        // is a lower bound on every completion.
        for (std::size_t c : chosen_) {
          if (price(c) > best_max_ + kTolerance) {
            prune = true;
            break;
          }
        }
      }
      if (!prune) descend(p);
      pop();
    }
  }

  void evaluate_leaf() {
    double worst = 0.0;
    double sum = 0.0;
    for (std::size_t c : chosen_) {
      const double cost = price(c);
      worst = std::max(worst, cost);
      sum += cost;
    }
    if (found_) {
      if (worst > best_max_ + kTolerance) return;
      const bool tie = std::abs(worst - best_max_) <= kTolerance;
      if (tie && !(sum < best_sum_ - kTolerance)) return;
    }
    std::vector<Path> tuple;
    tuple.reserve(chosen_.size());
    for (std::size_t c : chosen_) tuple.push_back(paths_[c]);
    if (!is_schedulable(tuple)) return;
    found_ = true;
    best_max_ = worst;
    best_sum_ = sum;
    best_ = chosen_;
  }

  const Roadmap& roadmap_;
  const std::vector<Path>& paths_;
  int robots_;
  bool monotone_;
  std::vector<std::vector<Step>> steps_;
  std::vector<int> forward_;
  std::vector<int> backward_;
  std::vector<std::size_t> chosen_;

  bool found_ = false;
  double best_max_ = 0.0;
  double best_sum_ = 0.0;
  std::vector<std::size_t> best_;
};

}  // namespace

std::vector<Path> enumerate_simple_paths(const Roadmap& roadmap, VertexId start, VertexId goal,
                                         std::uint64_t limit) {
  if (!roadmap.contains(start) || !roadmap.contains(goal)) {
    throw ValidationError("enumeration endpoints must be roadmap vertices");
  }
  std::vector<Path> out;
  std::vector<char> on_path(roadmap.vertex_count(), 0);
  Path current{start};
  on_path[static_cast<std::size_t>(start)] = 1;

  // Explicit stack of (vertex, next neighbour slot) keeps deep graphs safe.
  std::vector<std::pair<VertexId, std::size_t>> stack{{start, 0}};
  while (!stack.empty()) {
    auto& [u, slot] = stack.back();
    const auto nbrs = roadmap.neighbors(u);
    if (u == goal || slot >= nbrs.size()) {
      if (u == goal) {
        out.push_back(current);
        if (out.size() > limit) {
          throw OracleBudgetError("more than " + std::to_string(limit) +
                                      " simple paths between " + std::to_string(start) +
                                      " and " + std::to_string(goal),
                                  out.size());
        }
      }
      on_path[static_cast<std::size_t>(u)] = 0;
      current.pop_back();
      stack.pop_back();
      continue;
    }
    const VertexId next = nbrs[slot++].neighbor;
    if (on_path[static_cast<std::size_t>(next)]) continue;
    on_path[static_cast<std::size_t>(next)] = 1;
    current.push_back(next);
    stack.emplace_back(next, 0);
  }
  return out;
}

PathSet exhaustive_optimum(const Roadmap& roadmap, const PlanQuery& query,
                           const OracleLimits& limits) {
  validate(query, roadmap);
  if (limits.max_simple_paths == 0 || limits.max_combinations == 0) {
    throw ValidationError("oracle limits must be positive");
  }
  if (roadmap.cost_capacity() < query.robots) {
    throw PlanningError(PlanningError::Kind::CapacityExceeded,
                        "cost vectors cover " + std::to_string(roadmap.cost_capacity()) +
                            " robots, query needs " + std::to_string(query.robots));
  }
  const std::vector<Path> paths =
      enumerate_simple_paths(roadmap, query.start, query.goal, limits.max_simple_paths);
  if (paths.empty()) {
    throw PlanningError(PlanningError::Kind::Disconnected, "goal is not connected to start");
  }
  const std::uint64_t combos = multiset_count(paths.size(), query.robots);
  if (combos > limits.max_combinations) {
    throw OracleBudgetError(std::to_string(combos) + " path combinations exceed the budget of " +
                                std::to_string(limits.max_combinations),
                            combos);
  }

  TupleSearch search(roadmap, paths, query.robots);
  if (!search.run()) {
    throw PlanningError(PlanningError::Kind::NoFeasiblePlan,
                        "no combination of simple paths satisfies the constraints");
  }
  std::vector<Path> chosen;
  for (std::size_t idx : search.best()) chosen.push_back(paths[idx]);
  return make_pathset(roadmap, std::move(chosen));
}

double gap(double cost, double optimum) {
  if (!(optimum > 0.0)) throw ValidationError("gap needs a positive optimum");
  if (std::abs(cost - optimum) <= kTolerance) return 0.0;
  if (cost < optimum) {
    throw InternalError("cost " + std::to_string(cost) + " is below the certified optimum " +
                        std::to_string(optimum));
  }
  return (cost - optimum) / optimum;
}

}  // namespace formplan
