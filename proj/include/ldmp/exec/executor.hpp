#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldmp/exec/motion_generator.hpp"
#include "ldmp/exec/report.hpp"
#include "ldmp/planner/search.hpp"
#include "ldmp/sim/disturbance.hpp"

namespace ldmp::exec {

/// Everything about a benchmark that does not change between runs.
struct Setup {
  pddl::Domain domain;
  pddl::Problem problem;
  planner::Demonstration demo;
  planner::MultiGoalSpec spec;
  MotionLibrary motions;
  pddl::FactList goal;
  sim::WorldState world;  // template world the demo starts from
};

/// Reads demo.json and everything it points to; checks that the template
/// world's scene graph is the problem's initial state.
Setup load_setup(const std::filesystem::path& demo_json);

struct RunOptions {
  int budget = 60;  // max attempted actions
  std::size_t max_expansions = 500000;
};

/// What a live observer sees at iteration boundaries (step = -1) and after
/// every trajectory step.
struct LiveView {
  const sim::WorldState& world;
  const std::vector<pddl::GroundedAction>& plan;
  const std::vector<std::string>& sources;
  int cursor;
  int executed;  // attempted actions so far
  int step;
  const std::string& last_event;
};

/// Inbound channel for live disturbances. `poll` is called again with a
/// fresh view after every non-empty batch it returns, until it returns an
/// empty one; it may block (pause) and may throw StopRun.
struct LiveChannel {
  std::function<std::vector<sim::Disturbance>(const LiveView&)> poll;
};

/// Thrown from a live poll to end the run; the run then finishes as a
/// failure "stopped: <what>" with everything recorded so far.
class StopRun : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (true, largest id with fluents(scene) containing g_id), or (false, -1).
std::pair<bool, int> logic_in(const pddl::SceneGraph& scene, const planner::MultiGoalSpec& spec);

/// Closed loop: demo action a_id on a LogicIn hit, else the first action of a
/// fresh multi-goal plan; the scene is re-read after every action.
RunReport run_logic_dmp(const sim::WorldState& world, const Setup& setup,
                        std::span<const sim::Disturbance> disturbances, const RunOptions& options = {},
                        const LiveChannel* live = nullptr);

/// Demo actions in order, no adaptation.
RunReport run_linear(const sim::WorldState& world, const Setup& setup,
                     std::span<const sim::Disturbance> disturbances, const RunOptions& options = {});

/// Resumes the fixed plan at the latest expected state equal to the current
/// fluents; fails when none matches.
RunReport run_rlds_lite(const sim::WorldState& world, const Setup& setup,
                        std::span<const sim::Disturbance> disturbances, const RunOptions& options = {});

/// Open-loop execution of a given plan (used for from-scratch plans).
RunReport run_plan(const sim::WorldState& world, const Setup& setup,
                   const std::vector<pddl::GroundedAction>& actions, const RunOptions& options = {});

}  // namespace ldmp::exec
