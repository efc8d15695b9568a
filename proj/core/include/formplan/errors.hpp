#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace formplan {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, missing fields, wrong types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that breaks a data-type invariant. `index()` names the
/// offending polygon or edge when there is one, otherwise -1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, int index = -1)
      : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Roadmap construction could not produce a usable graph.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A precondition the pipeline should have established was violated.
class InternalError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  enum class Kind {
    GoalBlocked,       // goal reachable in the graph, but only through blocked edges
    Disconnected,      // goal not reachable at all
    CapacityExceeded,  // more robots on an edge than its cost vector covers
    NoFeasiblePlan,    // oracle: every tuple violated a constraint
  };

  PlanningError(Kind kind, const std::string& what, int robot = -1)
      : Error(what), kind_(kind), robot_(robot) {}

  Kind kind() const noexcept { return kind_; }
  /// 0-based robot index the failure belongs to, or -1.
  int robot() const noexcept { return robot_; }

 private:
  Kind kind_;
  int robot_;
};

/// Wait synchronization has no finite solution: the shared vertices are
/// visited in cyclic order. `cycle()` lists the vertices of one such cycle.
class ScheduleConflict : public Error {
 public:
  ScheduleConflict(const std::string& what, std::vector<std::int32_t> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  const std::vector<std::int32_t>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::int32_t> cycle_;
};

/// Exhaustive search refused to run (or stopped) because a budget was hit.
class OracleBudgetError : public Error {
 public:
  OracleBudgetError(const std::string& what, std::uint64_t reached)
      : Error(what), reached_(reached) {}
  std::uint64_t reached() const noexcept { return reached_; }

 private:
  std::uint64_t reached_;
};

}  // namespace formplan
