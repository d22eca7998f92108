#include "ldmp/exec/report.hpp"

namespace ldmp::exec {

std::vector<std::string> RunReport::action_names() const {
  std::vector<std::string> out;
  for (const auto& a : actions) out.push_back(a.name);
  return out;
}

nlohmann::json to_json(const RunReport& r, bool with_timing) {
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& a : r.actions) {
    nlohmann::json j = {{"name", a.name}, {"source", a.source}, {"success", a.success},
                        {"t_start", a.t_start}, {"t_end", a.t_end}};
    if (!a.reason.empty()) j["reason"] = a.reason;
    actions.push_back(j);
  }
  nlohmann::json dist = nlohmann::json::array();
  for (const auto& d : r.disturbances) {
    nlohmann::json j = {{"after_actions", d.after_actions}, {"time", d.time}};
    if (!d.declared.empty()) j["declared"] = d.declared;
    if (!d.classified.empty()) j["classified"] = d.classified;
    if (!d.error.empty()) j["error"] = d.error;
    dist.push_back(j);
  }
  nlohmann::json j = {{"method", r.method},
                      {"success", r.success},
                      {"actions", actions},
                      {"replans", r.replans},
                      {"logic_in_hits", r.logic_in_hits},
                      {"failures", r.failures},
                      {"sim_seconds", r.sim_seconds},
                      {"expansions", r.expansions},
                      {"disturbances", dist},
                      {"trace", r.trace}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (with_timing) j["planner_seconds"] = r.planner_seconds;
  return j;
}

}  // namespace ldmp::exec
