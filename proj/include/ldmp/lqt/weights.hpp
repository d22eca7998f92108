#pragma once

#include <span>
#include <vector>

#include "ldmp/lqt/reference.hpp"

namespace ldmp::lqt {

struct WeightConfig {
  double track_acc_weight = 1e-4;
  double terminal_pos_weight = 1e4;
  double r_weight = 1e-8;
  double via_precision = 1e4;
  // Not used by default; exposed for experimenting with velocity tracking.
  double track_vel_weight = 0.0;
};

/// Per-step precision blocks and the (via-point adjusted) tracking target mu.
struct WeightSchedule {
  std::vector<Mat> Q;  // T+1 blocks, 3d x 3d
  std::vector<Mat> R;  // T blocks, d x d
  std::vector<Vec> mu; // T+1 targets, 3d
  std::vector<ViaPoint> via;

  int horizon() const { return static_cast<int>(R.size()); }
  /// Q~_t = [I 0; -mu^T 1] diag(Q_t, 1) [I -mu; 0 1]
  Mat augmented(int t) const;
};

WeightSchedule build_weights(const ReferenceTrajectory& ref, double track_acc_weight,
                             double terminal_pos_weight, double r_weight,
                             std::span<const ViaPoint> via);

WeightSchedule build_weights(const ReferenceTrajectory& ref, const WeightConfig& config);

Mat augment_precision(const Mat& Q, const Vec& mu);

}  // namespace ldmp::lqt
