#pragma once

#include "ldmp/pddl/domain.hpp"
#include "ldmp/sim/world.hpp"

namespace ldmp::sim {

/// Full symbolic abstraction of the world: static type facts plus the
/// ontable/inregion/on/clear/inhand/handempty/reachable/free fluents.
pddl::SceneGraph scene_graph(const WorldState& world);

/// Keeps objects whose type the domain knows and facts whose predicate the
/// domain declares with type-compatible arguments. Untyped domains keep every
/// object, typed as `object`.
pddl::SceneGraph restrict(const pddl::SceneGraph& scene, const pddl::Domain& domain);

/// scene_graph followed by restrict.
pddl::SceneGraph observe(const WorldState& world, const pddl::Domain& domain);

}  // namespace ldmp::sim
