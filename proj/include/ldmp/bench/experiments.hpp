#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ldmp/bench/scenarios.hpp"

namespace ldmp::bench {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
  int n = 0;
};
MeanStd mean_std(const std::vector<double>& v);
double median(std::vector<double> v);

// ------------------------------------------------------------ generalize

struct GeneralizeTask {
  std::string id;
  sim::Level start_level = sim::Level::L1;
  bool linear = false;
  bool logic = false;
  bool full = false;
  std::string logic_failure, full_failure, linear_failure;
  std::size_t logic_expansions = 0;  // logic_dmp_plan from the start state
  std::size_t full_expansions = 0;   // plan_full from the start state
  int logic_plan_length = -1;
  int full_plan_length = -1;
  int logic_actions = 0;  // executed by the closed loop
  int logic_replans = 0;
  double logic_sim_seconds = 0.0;
  double full_sim_seconds = 0.0;
  double logic_plan_seconds = 0.0;  // wall clock
  double full_plan_seconds = 0.0;
};

struct GeneralizeResult {
  Benchmark benchmark = Benchmark::B1;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<GeneralizeTask> tasks;
  double wall_seconds = 0.0;

  double rate(bool GeneralizeTask::*field) const;
  double median_logic_expansions() const;
  double median_full_expansions() const;
  double expansion_ratio() const;  // median logic / median full
  /// Same medians over L3/L4 starts only, where neither planner is trivial.
  std::pair<double, double> novel_median_expansions() const;
};

GeneralizeResult run_generalize(const exec::Setup& setup, Benchmark b, int count, std::uint64_t seed);
nlohmann::json to_json(const GeneralizeResult& r);  // no wall-clock fields
std::string to_csv(const GeneralizeResult& r);
nlohmann::json timing_json(const GeneralizeResult& r);

// ------------------------------------------------------------ react

struct ReactTask {
  std::string id;
  exec::RunReport linear, rlds, logic;
};

struct ReactResult {
  Benchmark benchmark = Benchmark::B1;
  sim::Level level = sim::Level::L1;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<ReactTask> tasks;
  double wall_seconds = 0.0;

  double rate(exec::RunReport ReactTask::*method) const;
  MeanStd sim_time(exec::RunReport ReactTask::*method) const;  // successful runs only
};

ReactResult run_react(const exec::Setup& setup, Benchmark b, sim::Level level, int count, std::uint64_t seed);
nlohmann::json to_json(const ReactResult& r);
std::string to_csv(const ReactResult& r);
nlohmann::json timing_json(const ReactResult& r);

// ------------------------------------------------------------ viapoint

/// A goal cube for the pulling experiment, with the hook it is pulled with.
struct ViaGoal {
  std::string id;
  sim::Vec2 cube;
  sim::Vec2 hook;  // grasp point; the pull starts here
};
/// red, green, blue, plus "demo" (the demonstrated scene).
std::vector<ViaGoal> via_goals();
ViaGoal via_goal(const std::string& id);  // throws std::invalid_argument

struct ViapointResult {
  ViaGoal goal;
  sim::Vec2 via[2];
  sim::Vec2 end;
  double lqt_miss[2] = {0, 0};
  double dmp_miss[2] = {0, 0};
  double hook_lqt_error = 0.0;  // endpoint error on the hook pick
  double hook_dmp_error = 0.0;
  std::vector<sim::Vec2> reference, lqt, dmp;  // T+1 samples each

  bool lqt_pass(double tol = 1e-2) const { return lqt_miss[0] <= tol && lqt_miss[1] <= tol; }
  bool dmp_pass(double tol = 1e-2) const { return dmp_miss[0] <= tol && dmp_miss[1] <= tol; }
};

ViapointResult run_viapoint(const ViaGoal& goal);
nlohmann::json to_json(const ViapointResult& r);
std::string to_csv(const ViapointResult& r);

}  // namespace ldmp::bench
