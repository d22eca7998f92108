#include "ldmp/bench/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ldmp/dmp/classical_dmp.hpp"
#include "ldmp/lqt/controller.hpp"
#include "ldmp/sim/feasibility.hpp"
#include "ldmp/sim/scene_graph.hpp"

namespace ldmp::bench {

using sim::Vec2;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

nlohmann::json ms_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}, {"n", m.n}}; }

planner::PlannerOptions planner_options(const sim::WorldState& w) {
  planner::PlannerOptions o;
  o.feasible = sim::make_feasibility(w);
  return o;
}

}  // namespace

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  m.n = static_cast<int>(v.size());
  if (v.empty()) return m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / v.size());
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ------------------------------------------------------------ generalize

double GeneralizeResult::rate(bool GeneralizeTask::*field) const {
  if (tasks.empty()) return 0.0;
  int k = 0;
  for (const auto& t : tasks) k += t.*field;
  return double(k) / tasks.size();
}

double GeneralizeResult::median_logic_expansions() const {
  std::vector<double> v;
  for (const auto& t : tasks) v.push_back(double(t.logic_expansions));
  return median(v);
}

double GeneralizeResult::median_full_expansions() const {
  std::vector<double> v;
  for (const auto& t : tasks) v.push_back(double(t.full_expansions));
  return median(v);
}

double GeneralizeResult::expansion_ratio() const {
  const double full = median_full_expansions();
  return full > 0 ? median_logic_expansions() / full : (median_logic_expansions() > 0 ? INFINITY : 0.0);
}

std::pair<double, double> GeneralizeResult::novel_median_expansions() const {
  std::vector<double> l, f;
  for (const auto& t : tasks) {
    if (t.start_level == sim::Level::L3 || t.start_level == sim::Level::L4) {
      l.push_back(double(t.logic_expansions));
      f.push_back(double(t.full_expansions));
    }
  }
  return {median(l), median(f)};
}

GeneralizeResult run_generalize(const exec::Setup& setup, Benchmark b, int count, std::uint64_t seed) {
  const auto t0 = Clock::now();
  GeneralizeResult out;
  out.benchmark = b;
  out.count = count;
  out.seed = seed;
  for (const auto& sc : generate_suite(setup, b, "random-start", count, seed)) {
    GeneralizeTask t;
    t.id = sc.id;
    t.start_level = sc.start_level;
    const auto start = sim::observe(sc.world, setup.domain);

    const auto lin = exec::run_linear(sc.world, setup, {});
    t.linear = lin.success;
    t.linear_failure = lin.failure;

    try {
      const auto plan = planner::logic_dmp_plan(start, setup.demo, setup.spec, setup.domain, planner_options(sc.world));
      t.logic_expansions = plan.expanded;
      t.logic_plan_length = static_cast<int>(plan.size());
      t.logic_plan_seconds = plan.seconds;
    } catch (const planner::Unsolvable& e) {
      t.logic_expansions = e.expanded();
    }
    const auto logic = exec::run_logic_dmp(sc.world, setup, {});
    t.logic = logic.success;
    t.logic_failure = logic.failure;
    t.logic_actions = static_cast<int>(logic.actions.size());
    t.logic_replans = logic.replans;
    t.logic_sim_seconds = logic.sim_seconds;

    try {
      const auto plan = planner::plan_full(start, setup.goal, setup.domain, planner_options(sc.world));
      t.full_expansions = plan.expanded;
      t.full_plan_length = static_cast<int>(plan.size());
      t.full_plan_seconds = plan.seconds;
      const auto run = exec::run_plan(sc.world, setup, plan.actions);
      t.full = run.success;
      t.full_failure = run.failure;
      t.full_sim_seconds = run.sim_seconds;
    } catch (const planner::Unsolvable& e) {
      t.full_expansions = e.expanded();
      t.full_failure = std::string("planner: ") + e.what();
    }
    out.tasks.push_back(std::move(t));
  }
  out.wall_seconds = since(t0);
  return out;
}

nlohmann::json to_json(const GeneralizeResult& r) {
  nlohmann::json tasks = nlohmann::json::array();
  std::vector<double> lsim, fsim;
  for (const auto& t : r.tasks) {
    nlohmann::json j = {{"id", t.id},
                        {"start_level", sim::to_string(t.start_level)},
                        {"linear", t.linear},
                        {"logic_dmp", t.logic},
                        {"full", t.full},
                        {"logic_expansions", t.logic_expansions},
                        {"full_expansions", t.full_expansions},
                        {"logic_plan_length", t.logic_plan_length},
                        {"full_plan_length", t.full_plan_length},
                        {"logic_actions", t.logic_actions},
                        {"logic_replans", t.logic_replans},
                        {"logic_sim_seconds", t.logic_sim_seconds},
                        {"full_sim_seconds", t.full_sim_seconds}};
    if (!t.linear_failure.empty()) j["linear_failure"] = t.linear_failure;
    if (!t.logic_failure.empty()) j["logic_failure"] = t.logic_failure;
    if (!t.full_failure.empty()) j["full_failure"] = t.full_failure;
    tasks.push_back(j);
    if (t.logic) lsim.push_back(t.logic_sim_seconds);
    if (t.full) fsim.push_back(t.full_sim_seconds);
  }
  return {{"experiment", "generalize"},
          {"benchmark", to_string(r.benchmark)},
          {"count", r.count},
          {"seed", r.seed},
          {"success_rate",
           {{"linear", r.rate(&GeneralizeTask::linear)},
            {"logic_dmp", r.rate(&GeneralizeTask::logic)},
            {"full", r.rate(&GeneralizeTask::full)}}},
          {"median_expansions",
           {{"logic_dmp", r.median_logic_expansions()}, {"full", r.median_full_expansions()}}},
          {"expansion_ratio", r.expansion_ratio()},
          {"median_expansions_l3_l4",
           {{"logic_dmp", r.novel_median_expansions().first}, {"full", r.novel_median_expansions().second}}},
          {"sim_seconds", {{"logic_dmp", ms_json(mean_std(lsim))}, {"full", ms_json(mean_std(fsim))}}},
          {"tasks", tasks}};
}

std::string to_csv(const GeneralizeResult& r) {
  std::ostringstream os;
  os << "id,start_level,linear,logic_dmp,full,logic_expansions,full_expansions,logic_plan_length,"
        "full_plan_length,logic_actions,logic_replans,logic_sim_seconds,full_sim_seconds\n";
  for (const auto& t : r.tasks) {
    os << t.id << ',' << sim::to_string(t.start_level) << ',' << t.linear << ',' << t.logic << ',' << t.full << ','
       << t.logic_expansions << ',' << t.full_expansions << ',' << t.logic_plan_length << ',' << t.full_plan_length
       << ',' << t.logic_actions << ',' << t.logic_replans << ',' << num(t.logic_sim_seconds) << ','
       << num(t.full_sim_seconds) << '\n';
  }
  return os.str();
}

nlohmann::json timing_json(const GeneralizeResult& r) {
  std::vector<double> lt, ft;
  for (const auto& t : r.tasks) {
    lt.push_back(t.logic_plan_seconds);
    ft.push_back(t.full_plan_seconds);
  }
  const auto l = mean_std(lt), f = mean_std(ft);
  return {{"experiment", "generalize"},
          {"benchmark", to_string(r.benchmark)},
          {"wall_seconds", r.wall_seconds},
          {"planning_seconds", {{"logic_dmp", ms_json(l)}, {"full", ms_json(f)}}},
          {"planning_time_ratio", f.mean > 0 ? l.mean / f.mean : 0.0}};
}

// ------------------------------------------------------------ react

double ReactResult::rate(exec::RunReport ReactTask::*method) const {
  if (tasks.empty()) return 0.0;
  int k = 0;
  for (const auto& t : tasks) k += (t.*method).success;
  return double(k) / tasks.size();
}

MeanStd ReactResult::sim_time(exec::RunReport ReactTask::*method) const {
  std::vector<double> v;
  for (const auto& t : tasks) {
    if ((t.*method).success) v.push_back((t.*method).sim_seconds);
  }
  return mean_std(v);
}

ReactResult run_react(const exec::Setup& setup, Benchmark b, sim::Level level, int count, std::uint64_t seed) {
  const auto t0 = Clock::now();
  ReactResult out;
  out.benchmark = b;
  out.level = level;
  out.count = count;
  out.seed = seed;
  for (const auto& sc : generate_suite(setup, b, sim::to_string(level), count, seed)) {
    ReactTask t;
    t.id = sc.id;
    t.linear = exec::run_linear(sc.world, setup, sc.script);
    t.rlds = exec::run_rlds_lite(sc.world, setup, sc.script);
    t.logic = exec::run_logic_dmp(sc.world, setup, sc.script);
    out.tasks.push_back(std::move(t));
  }
  out.wall_seconds = since(t0);
  return out;
}

namespace {

const std::pair<const char*, exec::RunReport ReactTask::*> kMethods[] = {
    {"linear", &ReactTask::linear}, {"rlds_lite", &ReactTask::rlds}, {"logic_dmp", &ReactTask::logic}};

}  // namespace

nlohmann::json to_json(const ReactResult& r) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : r.tasks) {
    nlohmann::json j = {{"id", t.id}};
    for (const auto& [name, m] : kMethods) j[name] = exec::to_json(t.*m, false);
    tasks.push_back(j);
  }
  nlohmann::json rate, sim_time;
  for (const auto& [name, m] : kMethods) {
    rate[name] = r.rate(m);
    sim_time[name] = ms_json(r.sim_time(m));
  }
  return {{"experiment", "react"},   {"benchmark", to_string(r.benchmark)}, {"level", sim::to_string(r.level)},
          {"count", r.count},        {"seed", r.seed},                      {"success_rate", rate},
          {"sim_seconds", sim_time}, {"tasks", tasks}};
}

std::string to_csv(const ReactResult& r) {
  std::ostringstream os;
  os << "id,level,method,success,sim_seconds,actions,replans,logic_in_hits,failure\n";
  for (const auto& t : r.tasks) {
    for (const auto& [name, m] : kMethods) {
      const auto& rep = t.*m;
      os << t.id << ',' << sim::to_string(r.level) << ',' << name << ',' << rep.success << ','
         << num(rep.sim_seconds) << ',' << rep.actions.size() << ',' << rep.replans << ',' << rep.logic_in_hits
         << ",\"" << rep.failure << "\"\n";
    }
  }
  return os.str();
}

nlohmann::json timing_json(const ReactResult& r) {
  std::vector<double> v;
  for (const auto& t : r.tasks) v.push_back(t.logic.planner_seconds);
  return {{"experiment", "react"},
          {"benchmark", to_string(r.benchmark)},
          {"level", sim::to_string(r.level)},
          {"wall_seconds", r.wall_seconds},
          {"logic_dmp_planner_seconds", ms_json(mean_std(v))}};
}

// ------------------------------------------------------------ viapoint

std::vector<ViaGoal> via_goals() {
  const auto d = pull_demo();
  return {{"red", {0.62, 0.22}, {0.30, -0.18}},
          {"green", {0.80, 0.02}, {0.38, -0.24}},
          {"blue", {0.70, 0.30}, {0.33, -0.20}},
          {"demo", d.block, d.start}};
}

ViaGoal via_goal(const std::string& id) {
  for (const auto& g : via_goals()) {
    if (g.id == id) return g;
  }
  throw std::invalid_argument("unknown via-point goal '" + id + "' (red, green, blue, demo)");
}

namespace {

std::vector<Vec2> to_points(const std::vector<lqt::Vec>& v, std::size_t n) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < std::min(n, v.size()); ++i) out.emplace_back(v[i](0), v[i](1));
  return out;
}

}  // namespace

ViapointResult run_viapoint(const ViaGoal& goal) {
  const auto demo = pull_demo();
  const auto ref = pull_reference(demo);
  const int T = ref.horizon();
  const lqt::LqtConfig config;

  ViapointResult r;
  r.goal = goal;
  // object-centric: vias on the cube, the end keeps its offset to the cube
  r.via[0] = goal.cube + Vec2(0.0, demo.half);
  r.via[1] = goal.cube + Vec2(-demo.half, -demo.half);
  r.end = goal.cube + (demo.end - demo.block);
  const int idx[2] = {static_cast<int>(std::lround(sim::kPullViaFractions[0] * T)),
                      static_cast<int>(std::lround(sim::kPullViaFractions[1] * T))};

  std::vector<lqt::ViaPoint> via;
  for (int k = 0; k < 2; ++k) via.push_back({idx[k], lqt::Vec(r.via[k]), config.weights.via_precision});
  const auto gen = lqt::generalize(ref, lqt::Vec(goal.hook), lqt::Vec(r.end), via);
  r.lqt = to_points(lqt::track_reference(gen, lqt::Vec(goal.hook), config).trajectory.positions(), T + 1);

  const auto demo_pos = ref.positions();
  r.reference = to_points(demo_pos, T + 1);
  const auto model = dmp::train(demo_pos, ref.dt);
  r.dmp = to_points(dmp::rollout(model, lqt::Vec(goal.hook), lqt::Vec(r.end), ref.dt), T + 1);

  for (int k = 0; k < 2; ++k) {
    r.lqt_miss[k] = (r.lqt[idx[k]] - r.via[k]).norm();
    r.dmp_miss[k] = (r.dmp[idx[k]] - r.via[k]).norm();
  }

  // hook pick: rest pose to this scene's hook
  const auto pick = hook_pick_reference();
  const auto pick_pos = pick.positions();
  const lqt::Vec rest = pick_pos.front();
  const auto pick_gen = lqt::generalize(pick, rest, lqt::Vec(goal.hook));
  const auto pick_lqt = lqt::track_reference(pick_gen, rest, config).trajectory.positions();
  r.hook_lqt_error = (pick_lqt.back() - lqt::Vec(goal.hook)).norm();
  const auto pick_dmp = dmp::rollout(dmp::train(pick_pos, pick.dt), rest, lqt::Vec(goal.hook), pick.dt);
  r.hook_dmp_error = (pick_dmp.back() - lqt::Vec(goal.hook)).norm();
  return r;
}

nlohmann::json to_json(const ViapointResult& r) {
  auto pt = [](const Vec2& p) { return nlohmann::json::array({p.x(), p.y()}); };
  return {{"experiment", "viapoint"},
          {"goal", r.goal.id},
          {"cube", pt(r.goal.cube)},
          {"hook", pt(r.goal.hook)},
          {"via", {pt(r.via[0]), pt(r.via[1])}},
          {"end", pt(r.end)},
          {"lqt_cp", {{"miss", {r.lqt_miss[0], r.lqt_miss[1]}}, {"pass", r.lqt_pass()}}},
          {"dmp", {{"miss", {r.dmp_miss[0], r.dmp_miss[1]}}, {"pass", r.dmp_pass()}}},
          {"hook_pick", {{"lqt_cp_end_error", r.hook_lqt_error}, {"dmp_end_error", r.hook_dmp_error}}}};
}

std::string to_csv(const ViapointResult& r) {
  std::ostringstream os;
  os << "t,ref_x,ref_y,lqt_x,lqt_y,dmp_x,dmp_y\n";
  for (std::size_t t = 0; t < r.lqt.size(); ++t) {
    os << t << ',' << num(r.reference[t].x()) << ',' << num(r.reference[t].y()) << ',' << num(r.lqt[t].x()) << ','
       << num(r.lqt[t].y()) << ',' << num(r.dmp[t].x()) << ',' << num(r.dmp[t].y()) << '\n';
  }
  return os.str();
}

}  // namespace ldmp::bench
