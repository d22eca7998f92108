#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldmp/lqt/reference.hpp"
#include "ldmp/pddl/grounding.hpp"

namespace ldmp::planner {

class InconsistentDemonstration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Paired logical states L_0..L_N, actions a_0..a_{N-1} and one motion segment
/// per action schema.
struct Demonstration {
  std::vector<pddl::SceneGraph> states;
  std::vector<pddl::GroundedAction> actions;
  std::map<std::string, lqt::ReferenceTrajectory> motions;

  std::size_t length() const { return actions.size(); }
  /// Throws InconsistentDemonstration unless apply(L_i, a_i) == L_{i+1} for
  /// every i and every action schema has a motion segment.
  void validate() const;
};

/// Replays `actions` from `start` to produce the state sequence.
Demonstration make_demonstration(const pddl::SceneGraph& start,
                                 std::vector<pddl::GroundedAction> actions,
                                 std::map<std::string, lqt::ReferenceTrajectory> motions = {});

/// Ordered fluent projections of the demonstration plus the task goal.
struct MultiGoalSpec {
  std::vector<pddl::FactList> goals;
  pddl::FactList task_goal;
  std::set<pddl::Symbol> fluent_predicates;

  std::size_t size() const { return goals.size(); }
};

MultiGoalSpec build_multigoal(const Demonstration& demo, const pddl::FactList& goal,
                              std::span<const pddl::ActionSchema> schemas);

/// Files making up one benchmark's template task.
struct DemoFiles {
  std::filesystem::path root;
  std::filesystem::path domain;
  std::filesystem::path problem;
  std::filesystem::path world;
  std::vector<std::string> actions;
  std::map<std::string, std::filesystem::path> motions;
};

DemoFiles read_demo_files(const std::filesystem::path& demo_json);
std::map<std::string, lqt::ReferenceTrajectory> load_motions(const DemoFiles& files);

std::string read_text(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ldmp::planner
