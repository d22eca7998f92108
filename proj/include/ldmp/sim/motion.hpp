#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldmp/lqt/types.hpp"
#include "ldmp/pddl/grounding.hpp"
#include "ldmp/sim/world.hpp"

namespace ldmp::sim {

/// Fractions of the pull horizon at which the hook tip has to pass the top
/// edge and then the near corner of the block.
constexpr std::array<double, 2> kPullViaFractions{0.4, 0.7};

class NoMotionTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument roles of one grounded action, by schema name.
struct ActionRoles {
  std::string schema;
  std::string arm;
  std::string object;   // the moved/grasped object, or the block for pull
  std::string target;   // stack: lower block; place/shelve/pull: region; may be empty
  std::string hook;     // pull only
};
ActionRoles roles_of(const pddl::GroundedAction& action);

struct PullVia {
  double fraction = 0.0;
  Vec2 point;
};
/// Top edge, then lower-left corner of the block at its current pose.
std::vector<PullVia> via_points_for_pull(const WorldState& world, const std::string& block);

/// Grid pose (kGridPitch) inside `region` for `object`: footprint inside, clear
/// of level-1 objects by kInflation, center within the arm's reach, each with
/// kSamplerSlack to spare for tracking error. The
/// pick-up pose is tried first when it lies in the same region. Ties go to the
/// candidate closest to `prefer`, then smallest (x, y).
std::optional<Pose> sample_placement(const WorldState& world, const std::string& object,
                                     const std::string& region, const std::string& arm,
                                     std::span<const std::string> ignore = {});

/// Destination for a pulled block: reachable with a 1 cm margin, free, and
/// joined to the current pose by a collision-free straight drag.
std::optional<Pose> sample_pull_destination(const WorldState& world, const std::string& block,
                                            const std::string& region, const std::string& arm,
                                            std::span<const std::string> ignore = {});

/// Where the effector has to go for an action, plus pull via-points.
struct MotionTarget {
  Vec2 start;
  Vec2 end;
  std::vector<PullVia> via;
  std::optional<Pose> object_pose;  // resulting pose of the moved object
};
MotionTarget motion_target(const WorldState& world, const pddl::GroundedAction& action);

enum class Outcome { Success, Failed };
const char* to_string(Outcome o);

struct Execution {
  WorldState world;
  Outcome outcome = Outcome::Failed;
  std::string reason;
  int steps = 0;  // trajectory steps actually executed
};

/// Called after each trajectory step with the live world. Returning false
/// aborts the motion; the hook may also disturb the world.
using StepHook = std::function<bool(int step, WorldState& world)>;

/// Plays an effector trajectory and adjudicates the action's outcome at the
/// end. Throws pddl::ContractViolation when the action is not applicable in
/// scene_graph(world). Failed actions leave objects untouched except for
/// disturbances injected by the hook.
Execution execute_motion(const WorldState& world, const pddl::GroundedAction& action,
                         std::span<const lqt::Vec> trajectory, double dt, const StepHook& hook = {});

}  // namespace ldmp::sim
