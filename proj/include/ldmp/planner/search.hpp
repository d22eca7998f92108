#pragma once

#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldmp/planner/demonstration.hpp"

namespace ldmp::planner {

/// Geometric check consulted for every applicable action during expansion.
/// Must be a pure function of (state, action).
using FeasibilityFn = std::function<bool(const pddl::SceneGraph&, const pddl::GroundedAction&)>;
/// Non-negative action cost; unit cost when empty.
using CostFn = std::function<double(const pddl::GroundedAction&)>;

class Unsolvable : public std::runtime_error {
 public:
  Unsolvable(const std::string& what, std::size_t expanded)
      : std::runtime_error(what + " after " + std::to_string(expanded) + " expansions"),
        expanded_(expanded) {}
  std::size_t expanded() const { return expanded_; }

 private:
  std::size_t expanded_;
};

enum class Provenance { NewPrefix, DemoSuffix };
const char* to_string(Provenance p);

struct TaskPlan {
  std::vector<pddl::GroundedAction> actions;
  std::vector<pddl::SceneGraph> states;  // expected states, actions.size() + 1
  std::vector<Provenance> provenance;
  int matched_index = -1;  // i* for Logic-DMP plans
  std::size_t expanded = 0;
  double seconds = 0.0;

  std::size_t size() const { return actions.size(); }
};

struct PlannerOptions {
  FeasibilityFn feasible;
  CostFn cost;
  std::size_t max_expansions = 500000;
};

struct AnyGoalResult {
  TaskPlan prefix;
  int index = -1;
};

/// Uniform-cost search to any g_i (fluents(state) contains g_i). Among the
/// cheapest plans the largest index wins, then the lexicographically smallest
/// action sequence. Indices in `excluded` are not accepted as goals.
AnyGoalResult plan_to_any(const pddl::SceneGraph& start, const MultiGoalSpec& spec,
                          const pddl::Domain& domain, const PlannerOptions& options = {},
                          const std::set<int>& excluded = {});

/// plan_to_any prefix followed by the demonstration suffix a_{i*}..a_{N-1}.
TaskPlan logic_dmp_plan(const pddl::SceneGraph& start, const Demonstration& demo,
                        const MultiGoalSpec& spec, const pddl::Domain& domain,
                        const PlannerOptions& options = {});

/// From-scratch uniform-cost search to the single goal.
TaskPlan plan_full(const pddl::SceneGraph& start, const pddl::FactList& goal, const pddl::Domain& domain,
                   const PlannerOptions& options = {});

/// Replays through pddl apply only. Returns an empty string when the plan is
/// valid, else a description of the first problem.
std::string validate_plan(const pddl::SceneGraph& start, const std::vector<pddl::GroundedAction>& actions,
                          const pddl::FactList& goal);

/// {actions:[{name,args,provenance}], stats:{expanded[,seconds]}}
nlohmann::json to_json(const TaskPlan& plan, bool with_timing);

}  // namespace ldmp::planner
