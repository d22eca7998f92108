#include "ldmp/lqt/weights.hpp"

#include <stdexcept>
#include <string>

namespace ldmp::lqt {

Mat augment_precision(const Mat& Q, const Vec& mu) {
  const auto n = Q.rows();
  Mat left = Mat::Identity(n + 1, n + 1);
  left.block(n, 0, 1, n) = -mu.transpose();
  Mat middle = Mat::Zero(n + 1, n + 1);
  middle.topLeftCorner(n, n) = Q;
  middle(n, n) = 1.0;
  return left * middle * left.transpose();
}

Mat WeightSchedule::augmented(int t) const { return augment_precision(Q.at(t), mu.at(t)); }

WeightSchedule build_weights(const ReferenceTrajectory& ref, double track_acc_weight,
                             double terminal_pos_weight, double r_weight,
                             std::span<const ViaPoint> via) {
  if (!(track_acc_weight > 0.0) || !(terminal_pos_weight > 0.0) || !(r_weight > 0.0)) {
    throw std::invalid_argument("build_weights: weights must be positive");
  }
  const int T = ref.horizon();
  const int d = ref.dim();
  if (T < 1) throw std::invalid_argument("build_weights: reference horizon must be >= 1");
  const int n = 3 * d;
  const Mat I = Mat::Identity(d, d);

  WeightSchedule w;
  w.Q.assign(T + 1, Mat::Zero(n, n));
  w.R.assign(T, r_weight * I);
  w.mu.resize(T + 1);
  for (int t = 0; t <= T; ++t) {
    const Sample& s = ref.steps[t];
    w.mu[t].resize(n);
    w.mu[t] << s.position, s.velocity, s.acceleration;
  }
  w.mu[T].head(d) = ref.goal;
  for (int t = 1; t < T; ++t) w.Q[t].block(2 * d, 2 * d, d, d) = track_acc_weight * I;
  w.Q[T].topLeftCorner(d, d) = terminal_pos_weight * I;

  for (const auto& v : via) {
    if (v.step < 1 || v.step > T - 1) {
      throw std::invalid_argument("build_weights: via-point step " + std::to_string(v.step) +
                                  " outside [1, " + std::to_string(T - 1) + "]");
    }
    if (v.position.size() != d) throw std::invalid_argument("build_weights: via dimension");
    if (!(v.precision > 0.0)) throw std::invalid_argument("build_weights: via precision");
    w.mu[v.step].head(d) = v.position;
    w.Q[v.step].topLeftCorner(d, d) += v.precision * I;
    w.via.push_back(v);
  }
  return w;
}

WeightSchedule build_weights(const ReferenceTrajectory& ref, const WeightConfig& config) {
  WeightSchedule w = build_weights(ref, config.track_acc_weight, config.terminal_pos_weight,
                                   config.r_weight, ref.via);
  if (config.track_vel_weight > 0.0) {
    const int d = ref.dim();
    for (int t = 1; t < ref.horizon(); ++t) {
      w.Q[t].block(d, d, d, d) += config.track_vel_weight * Mat::Identity(d, d);
    }
  }
  return w;
}

}  // namespace ldmp::lqt
