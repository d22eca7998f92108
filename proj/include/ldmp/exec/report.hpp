#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace ldmp::exec {

struct ExecutedAction {
  std::string name;
  std::string source;  // demo | new-prefix | demo-suffix | plan
  bool success = false;
  std::string reason;
  double t_start = 0.0;
  double t_end = 0.0;
};

struct DisturbanceRecord {
  int after_actions = 0;  // executed actions when it fired
  double time = 0.0;
  std::string declared;    // level tag from the script, may be empty
  std::string classified;  // empty when rejected
  std::string error;
};

struct RunReport {
  std::string method;
  bool success = false;
  std::string failure;
  std::vector<ExecutedAction> actions;
  int replans = 0;        // planner invocations
  int logic_in_hits = 0;
  int failures = 0;       // failed motions
  double sim_seconds = 0.0;
  double planner_seconds = 0.0;  // wall clock
  std::size_t expansions = 0;
  std::vector<DisturbanceRecord> disturbances;
  std::vector<std::vector<std::string>> trace;  // scene graph after start and every action

  std::vector<std::string> action_names() const;
};

/// planner_seconds is wall-clock and only written when `with_timing` is set,
/// so batch reports stay byte-identical across runs.
nlohmann::json to_json(const RunReport& report, bool with_timing);

}  // namespace ldmp::exec
