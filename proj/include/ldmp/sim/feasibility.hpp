#pragma once

#include "ldmp/planner/search.hpp"
#include "ldmp/sim/world.hpp"

namespace ldmp::sim {

/// Geometric filter for the planner, evaluated against a frozen copy of
/// `world`, so it is a pure function of (state, action):
///  - grasp/release actions need the arm to reach the region the object
///    (or the lower block) is in, per the logical state;
///  - releases onto a region also need spare grid capacity there;
///  - pull needs the block within reach + hook length and a free reachable
///    destination.
/// Schemas without motion semantics are always feasible.
planner::FeasibilityFn make_feasibility(const WorldState& world);

}  // namespace ldmp::sim
