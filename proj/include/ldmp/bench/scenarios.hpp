#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ldmp/exec/executor.hpp"
#include "ldmp/lqt/reference.hpp"

namespace ldmp::bench {

enum class Benchmark { B1, B2, B3 };
const char* to_string(Benchmark b);       // "b1"
Benchmark benchmark_from_string(std::string s);  // b1/B1 ...; throws std::invalid_argument

std::filesystem::path data_dir();
std::filesystem::path demo_path(Benchmark b);

/// Demonstrated strokes, T = 100 at dt = 0.01, one per action schema.
/// Positions follow a minimum-jerk profile with a sideways lift; the pull
/// stroke visits the block's top edge and lower-left corner on the way.
std::map<std::string, lqt::ReferenceTrajectory> synthesize_motions(Benchmark b);

/// The pulling demonstration shared by B2 and the via-point experiment.
struct PullDemo {
  sim::Vec2 start;   // effector holding the hook
  sim::Vec2 block;   // demonstrated cube position
  sim::Vec2 end;     // hook tip at the end of the stroke
  double half = 0.025;
};
PullDemo pull_demo();
lqt::ReferenceTrajectory pull_reference(const PullDemo& demo);
/// Effector rest pose to the demonstrated hook grasp.
lqt::ReferenceTrajectory hook_pick_reference();

/// Writes motions/<schema>.json under data_dir()/<b>.
void export_motions(Benchmark b, const std::filesystem::path& root);

/// One generated task: a start world plus a disturbance script.
struct Scenario {
  std::string id;
  Benchmark benchmark = Benchmark::B1;
  std::string level;  // L1..L4, or random-start
  std::uint64_t seed = 0;
  int index = 0;
  sim::Level start_level = sim::Level::L1;  // random starts: the drawn level
  sim::WorldState world;
  std::vector<sim::Disturbance> script;
};

/// Pure function of its arguments. "random-start" draws L1-L4 uniformly per
/// task and builds a start world of that kind with an empty script; L1-L4
/// give the template logical state at fresh poses plus one scripted
/// disturbance of that level.
std::vector<Scenario> generate_suite(const exec::Setup& setup, Benchmark b, const std::string& level,
                                     int count, std::uint64_t seed);

/// Plays actions with straight-line effector paths to the exact targets.
/// Throws std::runtime_error if one of them fails.
sim::WorldState ideal_replay(sim::WorldState world, std::span<const pddl::GroundedAction> actions);

nlohmann::json to_json(const Scenario& s);

}  // namespace ldmp::bench
