#include <random>

#include "doctest.h"
#include "ldmp/sim/disturbance.hpp"
#include "ldmp/sim/feasibility.hpp"
#include "ldmp/sim/motion.hpp"
#include "support/sim_fixtures.hpp"

using namespace ldmp;
using namespace ldmp::sim;
using fixture::straight;
using fixture::through;

namespace {

pddl::GroundedAction act(const fixture::Bench& b, const char* text) { return pddl::ground(b.domain, text); }

std::vector<lqt::Vec> path_for(const WorldState& w, const pddl::GroundedAction& a) {
  const auto m = motion_target(w, a);
  if (m.via.empty()) return straight(m.start, m.end);
  std::vector<std::pair<int, Vec2>> knots{{0, m.start}};
  for (const auto& v : m.via) knots.emplace_back(static_cast<int>(std::lround(v.fraction * 100)), v.point);
  knots.emplace_back(100, m.end);
  return through(knots);
}

Execution run(const WorldState& w, const pddl::GroundedAction& a) {
  const auto traj = path_for(w, a);
  return execute_motion(w, a, traj, 0.01);
}

Disturbance move(const std::string& name, double x, double y, const std::string& support) {
  Disturbance d;
  d.type = DisturbanceType::MoveObject;
  d.object = name;
  d.pose = Pose{x, y, 0.0};
  d.support = support;
  return d;
}

Disturbance stack_on(const std::string& name, const std::string& support) {
  Disturbance d;
  d.type = DisturbanceType::MoveObject;
  d.object = name;
  d.support = support;
  return d;
}

Object cube(const std::string& name, double x, double y, const std::string& support) {
  Object o;
  o.name = name;
  o.type = "cube";
  o.kind = Kind::Block;
  o.pose = {x, y, 0.0};
  o.support = support;
  return o;
}

int count_pred(const pddl::SceneGraph& s, const char* pred) {
  int n = 0;
  for (const auto& f : s.facts()) n += f.predicate.str() == pred ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("benchmark worlds load, validate and match the problem's initial state") {
  for (const char* name : {"b1", "b2", "b3"}) {
    CAPTURE(name);
    const auto b = fixture::load(name);
    CHECK_NOTHROW(b.world.validate());
    const auto seen = observe(b.world, b.domain);
    CHECK(seen.facts() == b.problem.init.facts());
    CHECK(seen.objects() == b.problem.init.objects());
  }
}

TEST_CASE("scene graph: stacked pair") {
  auto b = fixture::load("b1");
  auto w = apply_disturbance(b.world, stack_on("C", "D"));
  const auto s = scene_graph(w);
  CHECK(s.contains(pddl::parse_fact("(on C D)")));
  CHECK(s.contains(pddl::parse_fact("(clear C)")));
  CHECK_FALSE(s.contains(pddl::parse_fact("(clear D)")));
  CHECK_FALSE(s.contains(pddl::parse_fact("(ontable C)")));
  CHECK(s.contains(pddl::parse_fact("(ontable D)")));
  CHECK(w.object("C").level == 2);
}

TEST_CASE("scene graph: empty table with one arm has no object fluents") {
  WorldState w;
  Object table;
  table.name = "table";
  table.type = "surface";
  table.kind = Kind::Region;
  table.pose = {0.5, 0.0, 0.0};
  table.half = {0.2, 0.2};
  w.objects["table"] = table;
  Arm arm;
  arm.name = "panda";
  w.arms["panda"] = arm;
  w.validate();
  const auto s = scene_graph(w);
  CHECK(count_pred(s, "inhand") == 0);
  CHECK(count_pred(s, "ontable") == 0);
  CHECK(count_pred(s, "clear") == 0);
  CHECK(count_pred(s, "reachable") == 0);
  CHECK(s.contains(pddl::parse_fact("(arm panda)")));
  CHECK(s.contains(pddl::parse_fact("(region table)")));
  CHECK(s.contains(pddl::parse_fact("(handempty panda)")));
}

TEST_CASE("scene graph: random scatter counts") {
  const auto b = fixture::load("b1");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.28, 0.72), uy(-0.32, 0.32);
  for (int trial = 0; trial < 30; ++trial) {
    WorldState w = b.world;
    for (const char* n : {"A", "B", "C", "D"}) w.objects.erase(n);
    const int n = 1 + trial % 8;
    int placed = 0;
    while (placed < n) {
      Object o = cube("X" + std::to_string(placed), std::round(ux(rng) * 100) / 100, std::round(uy(rng) * 100) / 100,
                      "table");
      o.level = 1;
      bool clash = false;
      for (const auto& [k, other] : w.objects) clash = clash || (other.level == 1 && overlaps(o, other));
      if (clash) continue;
      w.objects[o.name] = o;
      ++placed;
    }
    REQUIRE_NOTHROW(w.validate());
    const auto s = scene_graph(w);
    CHECK(count_pred(s, "ontable") == n);
    CHECK(count_pred(s, "clear") == n);
    CHECK(count_pred(s, "on") == 0);
    CHECK(std::is_sorted(s.facts().begin(), s.facts().end()));
  }
}

TEST_CASE("restrict keeps only what the domain can express") {
  const auto b = fixture::load("b1");
  const auto full = scene_graph(b.world);
  const auto r = restrict(full, b.domain);
  CHECK(full.objects().count(pddl::sym("table")) == 1);
  CHECK(r.objects().count(pddl::sym("table")) == 0);
  CHECK(count_pred(full, "reachable") == 4);
  CHECK(count_pred(r, "reachable") == 0);
  CHECK(count_pred(r, "ontable") == 4);
  CHECK(pddl::includes(full.facts(), r.facts()));
}

TEST_CASE("pick puts the cube in hand") {
  const auto b = fixture::load("b1");
  const auto ex = run(b.world, act(b, "(pick panda C)"));
  REQUIRE(ex.outcome == Outcome::Success);
  CHECK(ex.world.arms.at("panda").holding == std::optional<std::string>("C"));
  CHECK(scene_graph(ex.world).contains(pddl::parse_fact("(inhand panda C)")));
  CHECK(ex.world.object("C").level == -1);
  CHECK(ex.world.time == doctest::Approx(1.0));
  CHECK(ex.steps == 100);
}

TEST_CASE("place at the pick pose restores the world") {
  const auto b = fixture::load("b1");
  const auto pick = act(b, "(pick panda C)");
  const auto picked = run(b.world, pick);
  REQUIRE(picked.outcome == Outcome::Success);
  const Vec2 grasp_point = b.world.object("C").pose.xy();
  const auto back = straight(picked.world.arms.at("panda").effector, grasp_point);
  const auto placed = execute_motion(picked.world, act(b, "(place panda C)"), back, 0.01);
  REQUIRE(placed.outcome == Outcome::Success);
  CHECK(placed.world.objects == b.world.objects);
  CHECK_FALSE(placed.world.arms.at("panda").holding);
}

TEST_CASE("inapplicable actions are contract violations") {
  const auto b = fixture::load("b1");
  const auto traj = straight({0.3, 0.0}, {0.6, 0.1});
  CHECK_THROWS_AS(execute_motion(b.world, act(b, "(stack panda C D)"), traj, 0.01), pddl::ContractViolation);
  CHECK_THROWS_AS(execute_motion(b.world, act(b, "(unstack panda C D)"), traj, 0.01), pddl::ContractViolation);
}

TEST_CASE("missed grasp and stray release fail without moving objects") {
  const auto b = fixture::load("b1");
  const auto miss = execute_motion(b.world, act(b, "(pick panda C)"), straight({0.3, 0.0}, {0.6, 0.13}), 0.01);
  CHECK(miss.outcome == Outcome::Failed);
  CHECK(miss.world.objects == b.world.objects);
  CHECK_FALSE(miss.world.arms.at("panda").holding);

  const auto picked = run(b.world, act(b, "(pick panda C)"));
  const Vec2 e = picked.world.arms.at("panda").effector;
  // onto B's footprint
  const auto bump = execute_motion(picked.world, act(b, "(place panda C)"), straight(e, {0.46, -0.14}), 0.01);
  CHECK(bump.outcome == Outcome::Failed);
  CHECK(bump.world.object("B") == picked.world.object("B"));
  CHECK(bump.world.arms.at("panda").holding == std::optional<std::string>("C"));
  // off the table
  const auto off = execute_motion(picked.world, act(b, "(place panda C)"), straight(e, {0.5, 0.4}), 0.01);
  CHECK(off.outcome == Outcome::Failed);
  // stack too far from D's center
  const auto tilt = execute_motion(picked.world, act(b, "(stack panda C D)"), straight(e, {0.68, -0.2}), 0.01);
  CHECK(tilt.outcome == Outcome::Failed);
}

TEST_CASE("demo replay agrees with symbolic apply on every benchmark") {
  for (const char* name : {"b1", "b2", "b3"}) {
    CAPTURE(name);
    const auto b = fixture::load(name);
    WorldState w = b.world;
    for (std::size_t i = 0; i < b.demo.length(); ++i) {
      const auto& a = b.demo.actions[i];
      CAPTURE(a.name());
      const auto before = observe(w, b.domain);
      const auto ex = run(w, a);
      REQUIRE(ex.outcome == Outcome::Success);
      REQUIRE_NOTHROW(ex.world.validate());
      const auto after = observe(ex.world, b.domain);
      CHECK(fixture::fluents(after, b.domain) == fixture::fluents(pddl::apply(before, a), b.domain));
      CHECK(after.facts() == b.demo.states[i + 1].facts());
      w = ex.world;
    }
    CHECK(observe(w, b.domain).contains_all(b.problem.goal));
  }
}

TEST_CASE("replay is bitwise deterministic") {
  const auto b = fixture::load("b3");
  auto replay = [&] {
    WorldState w = b.world;
    for (const auto& a : b.demo.actions) w = run(w, a).world;
    return w;
  };
  const auto w1 = replay(), w2 = replay();
  CHECK(w1 == w2);
  CHECK(to_json(w1).dump() == to_json(w2).dump());
}

TEST_CASE("via points for pull") {
  WorldState w;
  Object table;
  table.name = "table";
  table.type = "surface";
  table.kind = Kind::Region;
  table.half = {1.0, 1.0};
  w.objects["table"] = table;
  w.objects["A"] = cube("A", 0.0, 0.0, "table");
  w.refresh_levels();
  auto v = via_points_for_pull(w, "A");
  REQUIRE(v.size() == 2);
  CHECK(v[0].fraction == 0.4);
  CHECK(v[1].fraction == 0.7);
  CHECK((v[0].point - Vec2(0.0, 0.025)).norm() < 1e-15);
  CHECK((v[1].point - Vec2(-0.025, -0.025)).norm() < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    const Vec2 d(u(rng), u(rng));
    WorldState moved = w;
    moved.object("A").pose.x += d.x();
    moved.object("A").pose.y += d.y();
    const auto vm = via_points_for_pull(moved, "A");
    for (int k = 0; k < 2; ++k) CHECK((vm[k].point - v[k].point - d).norm() < 1e-12);
  }
}

TEST_CASE("pull drags the cube only when both via points are passed") {
  const auto b = fixture::load("b2");
  WorldState w = apply_disturbance(b.world, move("B", 0.75, 0.15, "table"));
  CHECK_FALSE(scene_graph(w).contains(pddl::parse_fact("(reachable panda B)")));
  const auto picked = run(w, act(b, "(pick panda H table)"));
  REQUIRE(picked.outcome == Outcome::Success);
  w = picked.world;

  const auto pull = act(b, "(pull panda H B table)");
  const auto target = motion_target(w, pull);
  REQUIRE(target.via.size() == 2);
  REQUIRE(target.object_pose);
  CHECK(within_reach(w.arms.at("panda"), target.object_pose->xy()));

  // misses the top edge by 2 cm
  const auto stray = through({{0, target.start}, {40, target.via[0].point + Vec2(0.0, 0.02)},
                              {70, target.via[1].point}, {100, target.end}});
  const auto failed = execute_motion(w, pull, stray, 0.01);
  CHECK(failed.outcome == Outcome::Failed);
  CHECK(failed.world.object("B").pose == w.object("B").pose);

  const auto good = run(w, pull);
  REQUIRE(good.outcome == Outcome::Success);
  CHECK((good.world.object("B").pose.xy() - target.object_pose->xy()).norm() < 1e-12);
  const auto before = observe(w, b.domain), after = observe(good.world, b.domain);
  CHECK(after.contains(pddl::parse_fact("(reachable panda B)")));
  CHECK(fixture::fluents(after, b.domain) == fixture::fluents(pddl::apply(before, pull), b.domain));
}

TEST_CASE("placement sampler prefers the pick pose, then free reachable grid cells") {
  const auto b = fixture::load("b1");
  const auto picked = run(b.world, act(b, "(pick panda C)")).world;
  const auto p = sample_placement(picked, "C", "table", "panda");
  REQUIRE(p);
  CHECK(*p == b.world.object("C").pose);

  const auto blocked = apply_disturbance(picked, move("A", 0.6, 0.1, "table"));
  const auto q = sample_placement(blocked, "C", "table", "panda");
  REQUIRE(q);
  Object probe = blocked.object("C");
  probe.pose = *q;
  CHECK(footprint_inside(probe, blocked.object("table")));
  CHECK(within_reach(blocked.arms.at("panda"), q->xy()));
  for (const auto& [n, o] : blocked.objects) {
    if (o.level == 1) CHECK_FALSE(overlaps(probe, o, kInflation));
  }
  CHECK(std::abs(q->x / kGridPitch - std::round(q->x / kGridPitch)) < 1e-9);
}

TEST_CASE("disturbances classify into exactly one level") {
  const auto b = fixture::load("b1");
  WorldState w = b.world;
  for (int i = 0; i < 4; ++i) w = run(w, b.demo.actions[i]).world;  // B on C on D

  SUBCASE("slide 3 cm is L1") {
    const auto after = apply_disturbance(w, move("A", 0.38, 0.2, "table"));
    CHECK(classify_level(w, after, b.demo, b.domain) == Level::L1);
  }
  SUBCASE("back to an earlier demo state is L2") {
    const auto after = apply_disturbance(w, move("B", 0.45, -0.15, "table"));
    CHECK(classify_level(w, after, b.demo, b.domain) == Level::L2);
  }
  SUBCASE("unseen stacking is L3") {
    const auto after = apply_disturbance(w, stack_on("B", "A"));
    CHECK(classify_level(w, after, b.demo, b.domain) == Level::L3);
  }
  SUBCASE("a fifth red block on B is L4") {
    Disturbance d;
    d.type = DisturbanceType::AddObject;
    d.added = cube("E", 0.65, -0.2, "B");
    d.added.color = "red";
    const auto after = apply_disturbance(w, d);
    CHECK(after.object("E").level == 4);
    CHECK(classify_level(w, after, b.demo, b.domain) == Level::L4);
  }
}

TEST_CASE("moving a block carries its stack; invalid events are rejected") {
  const auto b = fixture::load("b1");
  WorldState w = b.world;
  for (int i = 0; i < 2; ++i) w = run(w, b.demo.actions[i]).world;  // C on D
  const auto moved = apply_disturbance(w, move("D", 0.4, -0.25, "table"));
  CHECK(moved.object("C").pose.x == doctest::Approx(0.4));
  CHECK(moved.object("C").pose.y == doctest::Approx(-0.25));
  CHECK(moved.object("C").support == "D");

  const WorldState copy = w;
  CHECK_THROWS_AS(apply_disturbance(w, move("A", 0.45, -0.15, "table")), InvalidDisturbance);  // onto B
  CHECK_THROWS_AS(apply_disturbance(w, move("A", 0.9, 0.0, "table")), InvalidDisturbance);     // off the table
  CHECK_THROWS_AS(apply_disturbance(w, stack_on("D", "C")), InvalidDisturbance);               // cycle
  CHECK_THROWS_AS(apply_disturbance(w, move("table", 0.0, 0.0, "table")), InvalidDisturbance);
  CHECK_THROWS_AS(apply_disturbance(w, move("Z", 0.4, 0.0, "table")), InvalidDisturbance);
  Disturbance dup;
  dup.type = DisturbanceType::AddObject;
  dup.added = cube("A", 0.3, -0.3, "table");
  CHECK_THROWS_AS(apply_disturbance(w, dup), InvalidDisturbance);
  CHECK(w == copy);

  const auto held = run(b.world, act(b, "(pick panda C)")).world;
  CHECK_THROWS_AS(apply_disturbance(held, move("C", 0.3, -0.3, "table")), InvalidDisturbance);
}

TEST_CASE("disturbance json round trip") {
  Disturbance d = move("A", 0.38, 0.2, "table");
  d.trigger = Trigger::AfterAction;
  d.after_action = 2;
  d.declared = Level::L1;
  CHECK(disturbance_from_json(to_json(d)) == d);
  Disturbance a;
  a.type = DisturbanceType::AddObject;
  a.trigger = Trigger::AtTime;
  a.at_time = 2.5;
  a.added = cube("E", 0.45, -0.15, "B");
  a.added.color = "red";
  a.declared = Level::L4;
  CHECK(disturbance_from_json(to_json(a)) == a);
  CHECK_THROWS_AS(disturbance_from_json(nlohmann::json::parse(R"({"trigger":"soon","type":"move_object"})")),
                  InvalidDisturbance);
  CHECK_THROWS_AS(disturbance_from_json(nlohmann::json::parse(R"({"trigger":"manual","type":"explode"})")),
                  InvalidDisturbance);
}

TEST_CASE("step hook can disturb or abort a motion") {
  const auto b = fixture::load("b1");
  const auto pick = act(b, "(pick panda C)");
  const auto traj = path_for(b.world, pick);
  StepHook nudge = [&](int step, WorldState& w) {
    if (step == 50) w = apply_disturbance(w, move("C", 0.6, 0.15, "table"));
    return true;
  };
  const auto ex = execute_motion(b.world, pick, traj, 0.01, nudge);
  CHECK(ex.outcome == Outcome::Failed);
  CHECK(ex.world.object("C").pose.y == doctest::Approx(0.15));

  StepHook stop = [](int step, WorldState&) { return step < 30; };
  const auto halted = execute_motion(b.world, pick, traj, 0.01, stop);
  CHECK(halted.outcome == Outcome::Failed);
  CHECK(halted.reason == "interrupted");
  CHECK(halted.steps == 30);
  CHECK(halted.world.time == doctest::Approx(0.3));
}

TEST_CASE("feasibility follows arm reach and is frozen") {
  const auto b = fixture::load("b3");
  WorldState w = b.world;
  const auto feasible = make_feasibility(w);
  const auto& s0 = b.demo.states[0];
  CHECK(feasible(s0, act(b, "(pick left A ltable)")));
  CHECK_FALSE(feasible(s0, act(b, "(pick right A ltable)")));
  const auto s2 = b.demo.states[2];  // B in mid
  CHECK(feasible(s2, act(b, "(pick right B mid)")));
  CHECK(feasible(s2, act(b, "(pick left B mid)")));
  const auto s4 = b.demo.states[4];  // B on rtable
  const auto s7 = b.demo.states[7];  // right holds A
  CHECK(feasible(s7, act(b, "(stack right A B)")));
  CHECK_FALSE(feasible(b.demo.states[5], act(b, "(stack left A B)")));
  CHECK_FALSE(feasible(s4, act(b, "(pick left B rtable)")));
  CHECK_FALSE(feasible(b.demo.states[1], act(b, "(place left B rtable)")));

  // the callback saw a copy
  w = apply_disturbance(w, move("A", 0.3, -0.45, "rtable"));
  for (int rep = 0; rep < 3; ++rep) {
    CHECK(feasible(s0, act(b, "(pick left A ltable)")));
    CHECK_FALSE(feasible(s0, act(b, "(pick right A ltable)")));
  }
}

TEST_CASE("pull feasibility needs the cube within reach plus hook length") {
  const auto b = fixture::load("b2");
  const auto pull = act(b, "(pull panda H B table)");
  auto state_of = [&](const WorldState& w) {
    auto picked = run(w, act(b, "(pick panda H table)")).world;
    return observe(picked, b.domain);
  };
  const auto near = apply_disturbance(b.world, move("B", 0.75, 0.15, "table"));
  CHECK(make_feasibility(near)(state_of(near), pull));
  const auto far = apply_disturbance(b.world, move("B", 0.875, 0.27, "table"));
  CHECK_FALSE(make_feasibility(far)(state_of(far), pull));
}

TEST_CASE("world json round trip and invariant violations") {
  const auto b = fixture::load("b1");
  CHECK(world_from_json(to_json(b.world)) == b.world);
  const auto held = run(b.world, act(b, "(pick panda C)")).world;
  CHECK(world_from_json(to_json(held)) == held);

  auto broken = [&](auto mutate) {
    auto j = to_json(b.world);
    mutate(j);
    return j;
  };
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) { j["objects"][1]["pose"] = {0.36, 0.2, 0.0}; })),
                  InvalidWorld);  // B onto A
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) { j["objects"][0]["support"] = "B"; })), InvalidWorld);
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) {
                    j["objects"][0]["support"] = "B";
                    j["objects"][1]["support"] = "A";
                  })),
                  InvalidWorld);
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) { j["objects"][0]["pose"] = {0.74, 0.2, 0.0}; })),
                  InvalidWorld);  // sticks out
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) { j["objects"][0]["type"] = "sphere"; })), InvalidWorld);
  CHECK_THROWS_AS(world_from_json(broken([](auto& j) { j["arms"][0]["holding"] = "A"; })), InvalidWorld);
  CHECK_THROWS_AS(world_from_json(nlohmann::json::parse(R"({"objects":[{"name":1}]})")), InvalidWorld);
}
