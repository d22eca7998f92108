#include "ldmp/planner/demonstration.hpp"

#include <fstream>
#include <sstream>

#include "ldmp/lqt/serialization.hpp"

namespace ldmp::planner {

void Demonstration::validate() const {
  if (states.size() != actions.size() + 1) {
    throw InconsistentDemonstration("demonstration needs one more state than actions");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!pddl::applicable(states[i], actions[i])) {
      throw InconsistentDemonstration("demo action " + std::to_string(i) + " " + actions[i].name() +
                                      " is not applicable in its state");
    }
    if (!(pddl::apply(states[i], actions[i]) == states[i + 1])) {
      throw InconsistentDemonstration("demo state " + std::to_string(i + 1) + " does not follow from " +
                                      actions[i].name());
    }
    if (!motions.empty() && !motions.count(actions[i].schema.str())) {
      throw InconsistentDemonstration("no motion segment for schema " + actions[i].schema.str());
    }
  }
}

Demonstration make_demonstration(const pddl::SceneGraph& start, std::vector<pddl::GroundedAction> actions,
                                 std::map<std::string, lqt::ReferenceTrajectory> motions) {
  Demonstration d;
  d.states.push_back(start);
  for (const auto& a : actions) {
    if (!pddl::applicable(d.states.back(), a)) {
      throw InconsistentDemonstration("demo action " + a.name() + " is not applicable");
    }
    d.states.push_back(pddl::apply(d.states.back(), a));
  }
  d.actions = std::move(actions);
  d.motions = std::move(motions);
  d.validate();
  return d;
}

MultiGoalSpec build_multigoal(const Demonstration& demo, const pddl::FactList& goal,
                              std::span<const pddl::ActionSchema> schemas) {
  if (demo.states.empty()) throw InconsistentDemonstration("empty demonstration");
  MultiGoalSpec spec;
  spec.fluent_predicates = pddl::fluent_predicates(schemas);
  spec.task_goal = goal;
  pddl::normalize(spec.task_goal);
  if (!demo.states.back().contains_all(spec.task_goal)) {
    throw InconsistentDemonstration("final demonstration state does not entail the task goal");
  }
  for (const auto& s : demo.states) spec.goals.push_back(pddl::fluents_of(s.facts(), spec.fluent_predicates));
  return spec;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

DemoFiles read_demo_files(const std::filesystem::path& demo_json) {
  const auto doc = read_json(demo_json);
  DemoFiles f;
  f.root = demo_json.parent_path();
  f.domain = f.root / doc.at("domain").get<std::string>();
  f.problem = f.root / doc.at("problem").get<std::string>();
  f.world = f.root / doc.at("world").get<std::string>();
  f.actions = doc.at("actions").get<std::vector<std::string>>();
  for (const auto& [k, v] : doc.at("motions").items()) f.motions[k] = f.root / v.get<std::string>();
  return f;
}

std::map<std::string, lqt::ReferenceTrajectory> load_motions(const DemoFiles& files) {
  std::map<std::string, lqt::ReferenceTrajectory> out;
  for (const auto& [k, p] : files.motions) out[k] = lqt::reference_from_json(read_json(p));
  return out;
}

}  // namespace ldmp::planner
