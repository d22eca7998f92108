#pragma once

#include <span>
#include <vector>

#include "ldmp/lqt/types.hpp"

namespace ldmp::lqt {

struct Sample {
  Vec position;
  Vec velocity;
  Vec acceleration;
};

/// A position the trajectory has to pass through at a given step.
struct ViaPoint {
  int step = 0;
  Vec position;
  double precision = 1e4;
};

/// Demonstrated profile mu: T+1 samples of position/velocity/acceleration plus
/// the terminal attractor. Via-points travel with the reference so that
/// object-centric generalization can move them along with start and goal.
struct ReferenceTrajectory {
  double dt = 0.01;
  std::vector<Sample> steps;
  Vec goal;
  std::vector<ViaPoint> via;

  int horizon() const { return static_cast<int>(steps.size()) - 1; }
  int dim() const { return static_cast<int>(goal.size()); }
  const Vec& start() const { return steps.front().position; }
  std::vector<Vec> positions() const;
};

/// Central differences in the interior, one-sided (second order) at the ends.
ReferenceTrajectory build_reference(std::span<const Vec> positions, double dt,
                                    const Vec& goal);

/// Linear resampling of a polyline to exactly `horizon + 1` samples.
std::vector<Vec> resample(std::span<const Vec> positions, int horizon);

/// Re-anchors a reference from (old start, old goal) to (new start, new goal)
/// with a per-dimension scale + translation. Dimensions whose demonstrated
/// span is below 1e-9 are translated only. Via-points follow the same map
/// unless `new_via` is non-empty, in which case it replaces them.
ReferenceTrajectory generalize(const ReferenceTrajectory& ref, const Vec& new_start,
                               const Vec& new_goal,
                               std::span<const ViaPoint> new_via = {});

}  // namespace ldmp::lqt
