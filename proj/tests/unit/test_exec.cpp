#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <set>

#include "doctest.h"
#include "ldmp/bench/scenarios.hpp"
#include "ldmp/exec/executor.hpp"
#include "ldmp/sim/scene_graph.hpp"

using namespace ldmp;
using bench::Benchmark;

namespace {

const exec::Setup& setup_for(Benchmark b) {
  static std::map<Benchmark, exec::Setup> cache;
  auto it = cache.find(b);
  if (it == cache.end()) it = cache.emplace(b, exec::load_setup(bench::demo_path(b))).first;
  return it->second;
}

std::vector<std::string> demo_names(const exec::Setup& s) {
  std::vector<std::string> out;
  for (const auto& a : s.demo.actions) out.push_back(a.name());
  return out;
}

// Largest id whose goal set is a subset, by sorted string comparison.
int logic_in_oracle(const pddl::SceneGraph& scene, const planner::MultiGoalSpec& spec) {
  auto facts = scene.to_strings();
  std::sort(facts.begin(), facts.end());
  int best = -1;
  for (std::size_t i = 0; i < spec.goals.size(); ++i) {
    std::vector<std::string> g;
    for (const auto& f : spec.goals[i]) g.push_back(f.str());
    std::sort(g.begin(), g.end());
    if (std::includes(facts.begin(), facts.end(), g.begin(), g.end())) best = static_cast<int>(i);
  }
  return best;
}

bool has_action(const exec::RunReport& r, const std::string& name) {
  const auto names = r.action_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Every executed action must be applicable symbolically; only valid for
// runs without disturbances.
void audit(const exec::Setup& s, const sim::WorldState& start, const exec::RunReport& r) {
  auto scene = sim::observe(start, s.domain);
  for (const auto& a : r.actions) {
    REQUIRE(a.success);
    const auto g = pddl::ground(s.domain, a.name);
    REQUIRE_MESSAGE(pddl::applicable(scene, g), a.name);
    scene = pddl::apply(scene, g);
  }
  CHECK(scene.contains_all(s.goal));
}

}  // namespace

TEST_CASE("nominal runs reproduce the demonstration") {
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    const auto& s = setup_for(b);
    CAPTURE(bench::to_string(b));
    const auto logic = exec::run_logic_dmp(s.world, s, {});
    CHECK(logic.success);
    CHECK(logic.replans == 0);
    CHECK(logic.logic_in_hits == static_cast<int>(s.demo.length()));
    CHECK(logic.action_names() == demo_names(s));
    CHECK(logic.trace.size() == s.demo.length() + 1);

    const auto lin = exec::run_linear(s.world, s, {});
    const auto rlds = exec::run_rlds_lite(s.world, s, {});
    CHECK(lin.success);
    CHECK(rlds.success);
    CHECK(lin.action_names() == logic.action_names());
    CHECK(rlds.action_names() == logic.action_names());
    CHECK(lin.sim_seconds == doctest::Approx(logic.sim_seconds));
    audit(s, s.world, logic);
  }
}

TEST_CASE("logic_in agrees with a subset scan") {
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    const auto& s = setup_for(b);
    for (const auto& state : s.demo.states) {
      const auto [hit, id] = exec::logic_in(state, s.spec);
      CHECK(hit);
      CHECK(id == logic_in_oracle(state, s.spec));
    }
    for (const auto& sc : bench::generate_suite(s, b, "random-start", 20, 3)) {
      const auto scene = sim::observe(sc.world, s.domain);
      const auto [hit, id] = exec::logic_in(scene, s.spec);
      const int want = logic_in_oracle(scene, s.spec);
      CHECK(hit == (want >= 0));
      CHECK(id == want);
    }
  }
}

TEST_CASE("logic_in misses on a novel state") {
  const auto& s = setup_for(Benchmark::B1);
  auto scene = sim::observe(s.world, s.domain);
  // A on B with C, D on the table is not any expected state
  const auto w = bench::ideal_replay(s.world, std::vector{pddl::ground(s.domain, "(pick panda A)"),
                                                          pddl::ground(s.domain, "(stack panda A B)")});
  scene = sim::observe(w, s.domain);
  const auto [hit, id] = exec::logic_in(scene, s.spec);
  CHECK_FALSE(hit);
  CHECK(id == -1);
}

TEST_CASE("L2 on B1 is recovered by LogicIn alone") {
  const auto& s = setup_for(Benchmark::B1);
  const auto suite = bench::generate_suite(s, Benchmark::B1, "L2", 3, 11);
  for (const auto& sc : suite) {
    const auto r = exec::run_logic_dmp(sc.world, s, sc.script);
    CHECK(r.success);
    CHECK(r.replans == 0);
    REQUIRE(r.disturbances.size() == 1);
    CHECK(r.disturbances[0].classified == "L2");
    // the stack of B onto C is repeated after B is put back
    const auto names = r.action_names();
    CHECK(std::count(names.begin(), names.end(), "(stack panda B C)") == 2);
  }
}

TEST_CASE("intruding block is unstacked before the demo resumes") {
  const auto& s = setup_for(Benchmark::B1);
  const auto suite = bench::generate_suite(s, Benchmark::B1, "L4", 2, 5);
  for (const auto& sc : suite) {
    const auto r = exec::run_logic_dmp(sc.world, s, sc.script);
    CHECK(r.success);
    CHECK(r.replans >= 1);
    CHECK(has_action(r, "(unstack panda E B)"));
    CHECK(r.disturbances.at(0).classified == "L4");
  }
}

TEST_CASE("block pushed out of reach on B2 is fetched with the hook") {
  const auto& s = setup_for(Benchmark::B2);
  const auto suite = bench::generate_suite(s, Benchmark::B2, "L3", 3, 9);
  for (const auto& sc : suite) {
    const auto r = exec::run_logic_dmp(sc.world, s, sc.script);
    CHECK(r.success);
    CHECK(has_action(r, "(pull panda H B table)"));
    const auto lin = exec::run_linear(sc.world, s, sc.script);
    CHECK_FALSE(lin.success);
    CHECK(lin.failure == "inapplicable (pick panda B table)");
  }
}

TEST_CASE("baselines fail where expected") {
  const auto& s = setup_for(Benchmark::B2);
  const auto sc = bench::generate_suite(s, Benchmark::B2, "L2", 1, 4).front();
  const auto lin = exec::run_linear(sc.world, s, sc.script);
  CHECK_FALSE(lin.success);
  CHECK(lin.failure == "goal not reached");
  const auto rlds = exec::run_rlds_lite(sc.world, s, sc.script);
  CHECK(rlds.success);

  const auto l4 = bench::generate_suite(s, Benchmark::B2, "L4", 1, 4).front();
  const auto r4 = exec::run_rlds_lite(l4.world, s, l4.script);
  CHECK_FALSE(r4.success);
  CHECK(r4.failure == "no expected state matches the scene");
}

TEST_CASE("at_time disturbance fires mid-motion") {
  const auto& s = setup_for(Benchmark::B1);
  sim::Disturbance d;
  d.trigger = sim::Trigger::AtTime;
  d.at_time = 2.5;  // halfway through pick B
  d.object = "A";
  d.pose = sim::Pose{0.30, 0.25, 0.0};
  d.support = "table";
  const auto r = exec::run_logic_dmp(s.world, s, std::vector{d});
  REQUIRE(r.disturbances.size() == 1);
  CHECK(r.disturbances[0].time == doctest::Approx(2.5).epsilon(0.006));
  CHECK(r.disturbances[0].after_actions == 2);
  CHECK(r.disturbances[0].classified == "L1");
  CHECK(r.success);
  CHECK(r.action_names() == demo_names(s));
}

TEST_CASE("rejected disturbances are logged and ignored") {
  const auto& s = setup_for(Benchmark::B1);
  sim::Disturbance d;
  d.trigger = sim::Trigger::AfterAction;
  d.after_action = 0;
  d.object = "Z";
  d.pose = sim::Pose{0.3, 0.3, 0.0};
  const auto r = exec::run_logic_dmp(s.world, s, std::vector{d});
  REQUIRE(r.disturbances.size() == 1);
  CHECK_FALSE(r.disturbances[0].error.empty());
  CHECK(r.disturbances[0].classified.empty());
  CHECK(r.success);
}

TEST_CASE("action budget") {
  const auto& s = setup_for(Benchmark::B1);
  exec::RunOptions opt;
  opt.budget = 3;
  const auto r = exec::run_logic_dmp(s.world, s, {}, opt);
  CHECK_FALSE(r.success);
  CHECK(r.failure == "action budget exhausted");
  CHECK(r.actions.size() == 3);
}

TEST_CASE("report json keeps wall-clock time optional") {
  const auto& s = setup_for(Benchmark::B3);
  const auto sc = bench::generate_suite(s, Benchmark::B3, "L3", 1, 2).front();
  const auto r = exec::run_logic_dmp(sc.world, s, sc.script);
  const auto plain = exec::to_json(r, false);
  const auto timed = exec::to_json(r, true);
  CHECK_FALSE(plain.contains("planner_seconds"));
  CHECK(timed.contains("planner_seconds"));
  CHECK(plain["method"] == "logic-dmp");
  CHECK(plain["actions"].size() == r.actions.size());
  CHECK(plain["disturbances"][0]["classified"] == "L3");
  CHECK(plain["disturbances"][0]["declared"] == "L3");
  // rerun is identical
  CHECK(exec::to_json(exec::run_logic_dmp(sc.world, s, sc.script), false).dump() == plain.dump());
}

TEST_CASE("random starts: levels, determinism and solvability") {
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    const auto& s = setup_for(b);
    CAPTURE(bench::to_string(b));
    const auto suite = bench::generate_suite(s, b, "random-start", 24, 21);
    const auto again = bench::generate_suite(s, b, "random-start", 24, 21);
    const auto other = bench::generate_suite(s, b, "random-start", 24, 22);
    int differs = 0;
    std::set<sim::Level> seen;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      const auto& sc = suite[i];
      CHECK(bench::to_json(sc).dump() == bench::to_json(again[i]).dump());
      differs += bench::to_json(sc).dump() != bench::to_json(other[i]).dump();
      CHECK(sc.script.empty());
      CHECK_NOTHROW(sc.world.validate());
      seen.insert(sc.start_level);

      // the drawn level is what the classifier sees relative to the template
      CHECK(sim::classify_level(s.world, sc.world, s.demo, s.domain) == sc.start_level);

      for (const auto& [n, o] : sc.world.objects) {
        if (o.kind != sim::Kind::Block) continue;
        CHECK(std::abs(o.pose.x * 100 - std::round(o.pose.x * 100)) < 1e-9);
        CHECK(std::abs(o.pose.y * 100 - std::round(o.pose.y * 100)) < 1e-9);
      }
      const auto r = exec::run_logic_dmp(sc.world, s, {});
      CHECK_MESSAGE(r.success, sc.id << ": " << r.failure);
      audit(s, sc.world, r);
      CHECK(exec::run_linear(sc.world, s, {}).success == (sc.start_level == sim::Level::L1));
    }
    CHECK(differs > 0);
    CHECK(seen.size() == 4);
  }
}

TEST_CASE("scripted suites declare the level they produce") {
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    const auto& s = setup_for(b);
    for (const std::string level : {"L1", "L2", "L3", "L4"}) {
      for (const auto& sc : bench::generate_suite(s, b, level, 3, 1)) {
        REQUIRE(sc.script.size() == 1);
        CHECK(sc.script[0].declared == sim::level_from_string(level));
        CHECK(sim::observe(sc.world, s.domain) == s.problem.init);
        const auto r = exec::run_logic_dmp(sc.world, s, sc.script);
        CHECK(r.success);
        REQUIRE(r.disturbances.size() == 1);
        CHECK(r.disturbances[0].classified == level);
      }
    }
  }
  CHECK_THROWS_AS(bench::generate_suite(setup_for(Benchmark::B1), Benchmark::B1, "L7", 1, 1), std::invalid_argument);
}

TEST_CASE("ideal replay of the demo reaches the goal") {
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    const auto& s = setup_for(b);
    const auto w = bench::ideal_replay(s.world, s.demo.actions);
    CHECK(sim::observe(w, s.domain).contains_all(s.goal));
  }
}

TEST_CASE("shipped motion files match a fresh export byte for byte") {
  namespace fs = std::filesystem;
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const fs::path tmp = fs::temp_directory_path() / "ldmp_motion_export";
  fs::remove_all(tmp);
  for (auto b : {Benchmark::B1, Benchmark::B2, Benchmark::B3}) {
    bench::export_motions(b, tmp);
    const auto shipped = bench::data_dir() / bench::to_string(b) / "motions";
    int files = 0;
    for (const auto& e : fs::directory_iterator(shipped)) {
      CAPTURE(e.path().string());
      const auto fresh = tmp / bench::to_string(b) / "motions" / e.path().filename();
      REQUIRE(fs::exists(fresh));
      CHECK(slurp(fresh) == slurp(e.path()));
      ++files;
    }
    CHECK(files == static_cast<int>(bench::synthesize_motions(b).size()));
  }
  fs::remove_all(tmp);
}
