#include "ldmp/planner/search.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace ldmp::planner {

namespace {

using Clock = std::chrono::steady_clock;

struct FactListHash {
  std::size_t operator()(const pddl::FactList& facts) const noexcept {
    std::size_t h = facts.size();
    for (const auto& f : facts) {
      h = h * 1000003u ^ f.predicate.hash();
      for (const auto& a : f.args) h = h * 31u ^ a.hash();
    }
    return h;
  }
};

struct Node {
  pddl::FactList facts;
  int parent = -1;
  int action = -1;  // index into the grounded action list
  double g = 0.0;
};

struct SearchResult {
  std::vector<int> path;  // node indices root..goal
  std::vector<Node> nodes;
  int goal_index = -1;
  std::size_t expanded = 0;
};

// Uniform-cost search. `goal_of` returns the best goal index a state
// satisfies, or -1. Once the first goal is popped, remaining nodes of equal
// cost are still examined for a larger index (they are popped, not expanded).
SearchResult search(const pddl::SceneGraph& start, const std::vector<pddl::GroundedAction>& actions,
                    const PlannerOptions& options, const std::function<int(const pddl::FactList&)>& goal_of,
                    bool prefer_larger_index) {
  SearchResult r;
  auto cost_of = [&](int a) { return options.cost ? options.cost(actions[a]) : 1.0; };

  using Entry = std::tuple<double, std::size_t, int>;  // (g, push order, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<pddl::FactList, int, FactListHash> seen;
  std::vector<bool> closed;
  std::size_t order = 0;

  r.nodes.push_back({start.facts(), -1, -1, 0.0});
  closed.push_back(false);
  seen.emplace(start.facts(), 0);
  open.emplace(0.0, order++, 0);

  int best = -1;
  double best_g = 0.0;
  while (!open.empty()) {
    auto [g, ord, id] = open.top();
    open.pop();
    if (closed[id] || g > r.nodes[id].g) continue;
    closed[id] = true;
    if (best >= 0 && g > best_g + 1e-12) break;
    const int gi = goal_of(r.nodes[id].facts);
    if (gi >= 0) {
      if (best < 0 || gi > r.goal_index) {
        best = id;
        best_g = g;
        r.goal_index = gi;
      }
      if (!prefer_larger_index) break;
      continue;
    }
    if (best >= 0) continue;  // only goal candidates of equal cost matter now
    if (r.expanded >= options.max_expansions) throw Unsolvable("expansion limit reached", r.expanded);
    ++r.expanded;
    const pddl::SceneGraph state = start.with_facts(r.nodes[id].facts);
    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
      if (!pddl::applicable(r.nodes[id].facts, actions[a])) continue;
      if (options.feasible && !options.feasible(state, actions[a])) continue;
      pddl::FactList next = pddl::apply_facts(r.nodes[id].facts, actions[a]);
      const double ng = g + cost_of(a);
      auto it = seen.find(next);
      if (it == seen.end()) {
        r.nodes.push_back({std::move(next), id, a, ng});
        closed.push_back(false);
        const int nid = static_cast<int>(r.nodes.size()) - 1;
        seen.emplace(r.nodes[nid].facts, nid);
        open.emplace(ng, order++, nid);
      } else if (!closed[it->second] && ng < r.nodes[it->second].g - 1e-12) {
        Node& n = r.nodes[it->second];
        n.parent = id;
        n.action = a;
        n.g = ng;
        open.emplace(ng, order++, it->second);
      }
    }
  }
  if (best < 0) throw Unsolvable("search space exhausted", r.expanded);
  for (int n = best; n >= 0; n = r.nodes[n].parent) r.path.push_back(n);
  std::reverse(r.path.begin(), r.path.end());
  return r;
}

TaskPlan to_plan(const pddl::SceneGraph& start, const std::vector<pddl::GroundedAction>& actions,
                 const SearchResult& r) {
  TaskPlan p;
  p.states.push_back(start);
  for (std::size_t k = 1; k < r.path.size(); ++k) {
    const Node& n = r.nodes[r.path[k]];
    p.actions.push_back(actions[n.action]);
    p.states.push_back(start.with_facts(n.facts));
    p.provenance.push_back(Provenance::NewPrefix);
  }
  p.expanded = r.expanded;
  return p;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

const char* to_string(Provenance p) { return p == Provenance::NewPrefix ? "new-prefix" : "demo-suffix"; }

AnyGoalResult plan_to_any(const pddl::SceneGraph& start, const MultiGoalSpec& spec, const pddl::Domain& domain,
                          const PlannerOptions& options, const std::set<int>& excluded) {
  const auto t0 = Clock::now();
  const auto actions = pddl::ground_all(domain, start.objects());
  auto goal_of = [&](const pddl::FactList& facts) {
    for (int i = static_cast<int>(spec.goals.size()) - 1; i >= 0; --i) {
      if (!excluded.count(i) && pddl::includes(facts, spec.goals[i])) return i;
    }
    return -1;
  };
  const SearchResult r = search(start, actions, options, goal_of, true);
  AnyGoalResult out{to_plan(start, actions, r), r.goal_index};
  out.prefix.matched_index = r.goal_index;
  out.prefix.seconds = since(t0);
  return out;
}

TaskPlan logic_dmp_plan(const pddl::SceneGraph& start, const Demonstration& demo, const MultiGoalSpec& spec,
                        const pddl::Domain& domain, const PlannerOptions& options) {
  const auto t0 = Clock::now();
  std::set<int> excluded;
  std::size_t expanded = 0;
  for (;;) {
    AnyGoalResult any;
    try {
      any = plan_to_any(start, spec, domain, options, excluded);
    } catch (const Unsolvable& e) {
      throw Unsolvable("no demonstration state reachable", expanded + e.expanded());
    }
    expanded += any.prefix.expanded;
    TaskPlan plan = std::move(any.prefix);
    // The suffix is re-checked under the current state: extra facts can break
    // negative preconditions and the world may veto a demo action.
    bool ok = true;
    for (std::size_t i = static_cast<std::size_t>(any.index); i < demo.actions.size(); ++i) {
      const auto& a = demo.actions[i];
      const auto& s = plan.states.back();
      if (!pddl::applicable(s, a) || (options.feasible && !options.feasible(s, a))) {
        ok = false;
        break;
      }
      plan.actions.push_back(a);
      plan.states.push_back(pddl::apply(s, a));
      plan.provenance.push_back(Provenance::DemoSuffix);
    }
    if (ok && plan.states.back().contains_all(spec.task_goal)) {
      plan.expanded = expanded;
      plan.seconds = since(t0);
      return plan;
    }
    excluded.insert(any.index);
  }
}

TaskPlan plan_full(const pddl::SceneGraph& start, const pddl::FactList& goal, const pddl::Domain& domain,
                   const PlannerOptions& options) {
  const auto t0 = Clock::now();
  const auto actions = pddl::ground_all(domain, start.objects());
  pddl::FactList g = goal;
  pddl::normalize(g);
  auto goal_of = [&](const pddl::FactList& facts) { return pddl::includes(facts, g) ? 0 : -1; };
  TaskPlan p = to_plan(start, actions, search(start, actions, options, goal_of, false));
  p.seconds = since(t0);
  return p;
}

std::string validate_plan(const pddl::SceneGraph& start, const std::vector<pddl::GroundedAction>& actions,
                          const pddl::FactList& goal) {
  pddl::SceneGraph s = start;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!pddl::applicable(s, actions[i])) {
      return "step " + std::to_string(i) + ": " + actions[i].name() + " not applicable";
    }
    s = pddl::apply(s, actions[i]);
  }
  pddl::FactList g = goal;
  pddl::normalize(g);
  if (!s.contains_all(g)) return "final state does not entail the goal";
  return {};
}

nlohmann::json to_json(const TaskPlan& plan, bool with_timing) {
  nlohmann::json acts = nlohmann::json::array();
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    std::vector<std::string> args;
    for (const auto& a : plan.actions[i].args) args.push_back(a.str());
    acts.push_back({{"name", plan.actions[i].schema.str()},
                    {"args", args},
                    {"provenance", to_string(plan.provenance.at(i))}});
  }
  nlohmann::json stats = {{"expanded", plan.expanded}};
  if (with_timing) stats["seconds"] = plan.seconds;
  nlohmann::json j = {{"actions", acts}, {"stats", stats}};
  if (plan.matched_index >= 0) j["matched_index"] = plan.matched_index;
  return j;
}

}  // namespace ldmp::planner
