#include "ldmp/exec/executor.hpp"

#include <cmath>

#include "ldmp/sim/feasibility.hpp"
#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::exec {

Setup load_setup(const std::filesystem::path& demo_json) {
  const auto files = planner::read_demo_files(demo_json);
  Setup s;
  s.domain = pddl::parse_domain(planner::read_text(files.domain));
  s.problem = pddl::parse_problem(planner::read_text(files.problem), s.domain);
  s.world = sim::world_from_json(planner::read_json(files.world));
  const auto seen = sim::observe(s.world, s.domain);
  if (!(seen == s.problem.init)) {
    throw planner::InconsistentDemonstration("world " + files.world.string() +
                                             " does not match the problem's initial state");
  }
  std::vector<pddl::GroundedAction> actions;
  for (const auto& a : files.actions) actions.push_back(pddl::ground(s.domain, a));
  s.motions.segments = planner::load_motions(files);
  s.demo = planner::make_demonstration(s.problem.init, std::move(actions), s.motions.segments);
  s.demo.validate();
  s.goal = s.problem.goal;
  s.spec = planner::build_multigoal(s.demo, s.goal, s.domain.actions);
  return s;
}

std::pair<bool, int> logic_in(const pddl::SceneGraph& scene, const planner::MultiGoalSpec& spec) {
  for (int i = static_cast<int>(spec.goals.size()) - 1; i >= 0; --i) {
    if (scene.contains_all(spec.goals[i])) return {true, i};
  }
  return {false, -1};
}

namespace {

// Shared bookkeeping: world, scripted disturbances, live channel, report.
class Runner {
 public:
  Runner(const sim::WorldState& world, const Setup& setup, std::span<const sim::Disturbance> script,
         const RunOptions& options, const LiveChannel* live, std::string method)
      : w_(world), setup_(setup), options_(options), live_(live), pending_(script.begin(), script.end()),
        fired_(script.size(), false) {
    report_.method = std::move(method);
    dt_ = setup.motions.segments.empty() ? 0.01 : setup.motions.segments.begin()->second.dt;
    trace();
  }

  sim::WorldState& world() { return w_; }
  RunReport& report() { return report_; }
  pddl::SceneGraph scene() const { return sim::observe(w_, setup_.domain); }
  bool goal_reached() const { return scene().contains_all(setup_.goal); }
  bool over_budget() const { return static_cast<int>(report_.actions.size()) >= options_.budget; }

  void set_plan(std::vector<pddl::GroundedAction> plan, std::vector<std::string> sources, int cursor) {
    plan_ = std::move(plan);
    sources_ = std::move(sources);
    cursor_ = cursor;
  }

  void boundary() {
    fire_due_time_events();
    poll(-1);
  }

  // Executes one action; returns true when the motion succeeded.
  bool execute(const pddl::GroundedAction& a, const std::string& source) {
    ExecutedAction rec{a.name(), source, false, {}, w_.time, w_.time};
    const auto objects_before = w_.objects;
    const std::size_t disturbances_before = report_.disturbances.size();
    try {
      const auto motion = generate_motion(w_, a, setup_.motions);
      sim::StepHook hook;
      if (live_ || time_events_left()) {
        hook = [&](int step, sim::WorldState& live_world) {
          w_ = live_world;
          fire_due_time_events();
          poll(step);
          live_world = w_;
          return true;
        };
      }
      const auto ex = sim::execute_motion(w_, a, motion.positions, dt_, hook);
      w_ = ex.world;
      rec.success = ex.outcome == sim::Outcome::Success;
      rec.reason = ex.reason;
    } catch (const sim::NoMotionTarget& e) {
      rec.reason = e.what();
    } catch (const std::out_of_range& e) {
      rec.reason = e.what();
    }
    rec.t_end = w_.time;
    last_event_ = (rec.success ? "executed " : "failed ") + rec.name;
    if (!rec.success) ++report_.failures;
    report_.actions.push_back(rec);
    if (cursor_ >= 0) ++cursor_;
    trace();
    fire_after_action_events();
    stuck_ = !rec.success && w_.objects == objects_before && report_.disturbances.size() == disturbances_before;
    return rec.success;
  }

  // A failed action that changed nothing will fail again identically.
  bool stuck() const { return stuck_; }

  RunReport finish(bool success, std::string failure = {}) {
    report_.success = success;
    report_.failure = std::move(failure);
    report_.sim_seconds = w_.time;
    return report_;
  }

  void note(std::string event) { last_event_ = std::move(event); }

 private:
  void apply(const sim::Disturbance& d) {
    DisturbanceRecord rec;
    rec.after_actions = static_cast<int>(report_.actions.size());
    rec.time = w_.time;
    if (d.declared) rec.declared = sim::to_string(*d.declared);
    try {
      const auto after = sim::apply_disturbance(w_, d);
      rec.classified = sim::to_string(sim::classify_level(w_, after, setup_.demo, setup_.domain));
      w_ = after;
      last_event_ = "disturbance " + rec.classified;
    } catch (const sim::InvalidDisturbance& e) {
      rec.error = e.what();
      last_event_ = "rejected disturbance";
    }
    report_.disturbances.push_back(rec);
  }

  bool time_events_left() const {
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      if (!fired_[i] && pending_[i].trigger == sim::Trigger::AtTime) return true;
    }
    return false;
  }

  void fire_due_time_events() {
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      const auto& d = pending_[i];
      if (!fired_[i] && d.trigger == sim::Trigger::AtTime && w_.time >= d.at_time - dt_ / 2) {
        fired_[i] = true;
        apply(d);
      }
    }
  }

  void fire_after_action_events() {
    const int k = static_cast<int>(report_.actions.size()) - 1;
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      const auto& d = pending_[i];
      if (!fired_[i] && d.trigger == sim::Trigger::AfterAction && d.after_action == k) {
        fired_[i] = true;
        apply(d);
      }
    }
  }

  void poll(int step) {
    if (!live_ || !live_->poll) return;
    for (;;) {
      const LiveView view{w_, plan_, sources_, cursor_, static_cast<int>(report_.actions.size()), step, last_event_};
      const auto batch = live_->poll(view);
      if (batch.empty()) return;
      for (const auto& d : batch) apply(d);
    }
  }

  void trace() { report_.trace.push_back(scene().to_strings()); }

  sim::WorldState w_;
  const Setup& setup_;
  RunOptions options_;
  const LiveChannel* live_;
  std::vector<sim::Disturbance> pending_;
  std::vector<bool> fired_;
  RunReport report_;
  double dt_ = 0.01;
  std::vector<pddl::GroundedAction> plan_;
  std::vector<std::string> sources_;
  int cursor_ = -1;
  std::string last_event_;
  bool stuck_ = false;
};

std::vector<std::string> demo_sources(const Setup& s) { return std::vector<std::string>(s.demo.length(), "demo"); }

RunReport logic_dmp_loop(Runner& run, const Setup& setup, const RunOptions& options);

}  // namespace

RunReport run_logic_dmp(const sim::WorldState& world, const Setup& setup,
                        std::span<const sim::Disturbance> disturbances, const RunOptions& options,
                        const LiveChannel* live) {
  Runner run(world, setup, disturbances, options, live, "logic-dmp");
  run.set_plan(setup.demo.actions, demo_sources(setup), 0);
  try {
    return logic_dmp_loop(run, setup, options);
  } catch (const StopRun& e) {
    return run.finish(false, std::string("stopped: ") + e.what());
  }
}

namespace {

RunReport logic_dmp_loop(Runner& run, const Setup& setup, const RunOptions& options) {
  const int N = static_cast<int>(setup.demo.length());
  for (;;) {
    run.boundary();
    const auto scene = run.scene();
    if (scene.contains_all(setup.goal)) return run.finish(true);
    if (run.over_budget()) return run.finish(false, "action budget exhausted");

    const auto [hit, id] = logic_in(scene, setup.spec);
    pddl::GroundedAction a;
    std::string source;
    if (hit && id < N && pddl::applicable(scene, setup.demo.actions[id])) {
      a = setup.demo.actions[id];
      source = "demo";
      ++run.report().logic_in_hits;
      run.set_plan(setup.demo.actions, demo_sources(setup), id);
      run.note("logic-in " + std::to_string(id));
    } else {
      ++run.report().replans;
      planner::PlannerOptions popt;
      popt.feasible = sim::make_feasibility(run.world());
      popt.max_expansions = options.max_expansions;
      planner::TaskPlan plan;
      try {
        plan = planner::logic_dmp_plan(scene, setup.demo, setup.spec, setup.domain, popt);
      } catch (const planner::Unsolvable& e) {
        run.report().expansions += e.expanded();
        return run.finish(false, std::string("planner: ") + e.what());
      }
      run.report().planner_seconds += plan.seconds;
      run.report().expansions += plan.expanded;
      if (plan.actions.empty()) return run.finish(false, "planner returned an empty plan");
      std::vector<std::string> sources;
      for (auto p : plan.provenance) sources.push_back(planner::to_string(p));
      a = plan.actions.front();
      source = sources.front();
      run.set_plan(plan.actions, sources, 0);
      run.note("replan, i* = " + std::to_string(plan.matched_index));
    }
    run.execute(a, source);
    if (run.stuck()) return run.finish(false, "action " + a.name() + " failed without changing the world");
  }
}

}  // namespace

RunReport run_linear(const sim::WorldState& world, const Setup& setup,
                     std::span<const sim::Disturbance> disturbances, const RunOptions& options) {
  Runner run(world, setup, disturbances, options, nullptr, "linear");
  run.set_plan(setup.demo.actions, demo_sources(setup), 0);
  for (const auto& a : setup.demo.actions) {
    run.boundary();
    if (!pddl::applicable(run.scene(), a)) return run.finish(false, "inapplicable " + a.name());
    if (!run.execute(a, "demo")) return run.finish(false, "motion failed for " + a.name());
  }
  run.boundary();
  if (!run.goal_reached()) return run.finish(false, "goal not reached");
  return run.finish(true);
}

RunReport run_rlds_lite(const sim::WorldState& world, const Setup& setup,
                        std::span<const sim::Disturbance> disturbances, const RunOptions& options) {
  Runner run(world, setup, disturbances, options, nullptr, "rlds-lite");
  const int N = static_cast<int>(setup.demo.length());
  for (;;) {
    run.boundary();
    const auto scene = run.scene();
    if (scene.contains_all(setup.goal)) return run.finish(true);
    if (run.over_budget()) return run.finish(false, "action budget exhausted");
    const auto current = pddl::fluents_of(scene.facts(), setup.spec.fluent_predicates);
    int j = -1;
    for (int i = N; i >= 0; --i) {
      if (setup.spec.goals[i] == current) {
        j = i;
        break;
      }
    }
    if (j < 0) return run.finish(false, "no expected state matches the scene");
    if (j == N) return run.finish(false, "at the final expected state without the goal");
    run.set_plan(setup.demo.actions, demo_sources(setup), j);
    run.execute(setup.demo.actions[j], "demo");
    if (run.stuck()) return run.finish(false, "action failed without changing the world");
  }
}

RunReport run_plan(const sim::WorldState& world, const Setup& setup,
                   const std::vector<pddl::GroundedAction>& actions, const RunOptions& options) {
  Runner run(world, setup, {}, options, nullptr, "plan");
  run.set_plan(actions, std::vector<std::string>(actions.size(), "plan"), 0);
  for (const auto& a : actions) {
    if (!pddl::applicable(run.scene(), a)) return run.finish(false, "inapplicable " + a.name());
    if (!run.execute(a, "plan")) return run.finish(false, "motion failed for " + a.name());
  }
  if (!run.goal_reached()) return run.finish(false, "goal not reached");
  return run.finish(true);
}

}  // namespace ldmp::exec
