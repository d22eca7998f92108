#pragma once

#include <string>
#include <vector>

#include "ldmp/planner/demonstration.hpp"
#include "ldmp/sim/scene_graph.hpp"
#include "ldmp/sim/world.hpp"

namespace fixture {

using ldmp::lqt::Vec;
using ldmp::sim::Vec2;

struct Bench {
  ldmp::pddl::Domain domain;
  ldmp::pddl::Problem problem;
  ldmp::sim::WorldState world;
  ldmp::planner::Demonstration demo;
};

inline Bench load(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(LDMP_DATA_DIR) / name;
  const auto files = ldmp::planner::read_demo_files(dir / "demo.json");
  Bench b;
  b.domain = ldmp::pddl::parse_domain(ldmp::planner::read_text(files.domain));
  b.problem = ldmp::pddl::parse_problem(ldmp::planner::read_text(files.problem), b.domain);
  b.world = ldmp::sim::world_from_json(ldmp::planner::read_json(files.world));
  std::vector<ldmp::pddl::GroundedAction> actions;
  for (const auto& a : files.actions) actions.push_back(ldmp::pddl::ground(b.domain, a));
  b.demo = ldmp::planner::make_demonstration(b.problem.init, std::move(actions));
  return b;
}

/// Evenly spaced points from a to b, T+1 samples.
inline std::vector<Vec> straight(const Vec2& a, const Vec2& b, int T = 100) {
  std::vector<Vec> out;
  for (int t = 0; t <= T; ++t) {
    const double s = double(t) / T;
    out.push_back(Vec((a + s * (b - a)).eval()));
  }
  return out;
}

/// Piecewise-linear path through knots placed at the given step indices.
inline std::vector<Vec> through(const std::vector<std::pair<int, Vec2>>& knots) {
  std::vector<Vec> out;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const auto& [i0, p0] = knots[k];
    const auto& [i1, p1] = knots[k + 1];
    for (int t = i0; t < i1; ++t) {
      const double s = double(t - i0) / (i1 - i0);
      out.push_back(Vec((p0 + s * (p1 - p0)).eval()));
    }
  }
  out.push_back(Vec(knots.back().second));
  return out;
}

inline ldmp::pddl::FactList fluents(const ldmp::pddl::SceneGraph& s, const ldmp::pddl::Domain& d) {
  return ldmp::pddl::fluents_of(s.facts(), ldmp::pddl::fluent_predicates(d.actions));
}

}  // namespace fixture
