#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldmp/lqt/controller.hpp"
#include "ldmp/sim/motion.hpp"

namespace ldmp::exec {

/// Demonstrated motion segment per action schema plus the LQT-CP settings
/// used to reproduce them.
struct MotionLibrary {
  std::map<std::string, lqt::ReferenceTrajectory> segments;
  lqt::LqtConfig config;
};

struct GeneratedMotion {
  sim::MotionTarget target;
  lqt::ReferenceTrajectory reference;  // generalized segment
  std::vector<lqt::Vec> positions;     // LQT-CP rollout, T+1 samples
};

/// Object-centric generalization: the schema's segment is re-anchored to the
/// effector and the action's target (pull via-points replaced by the ones on
/// the current block), then tracked with LQT-CP from rest.
/// Throws sim::NoMotionTarget, or std::out_of_range when the schema has no segment.
GeneratedMotion generate_motion(const sim::WorldState& world, const pddl::GroundedAction& action,
                                const MotionLibrary& library);

}  // namespace ldmp::exec
