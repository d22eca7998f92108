#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ldmp::dmp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct DmpConfig {
  double alpha_z = 25.0;  // beta_z = alpha_z / 4 (critically damped)
  double alpha_x = 3.0;
  int basis_count = 20;
  int substeps = 10;          // Euler substeps per output sample
  double settle_factor = 3.0; // rollout horizon as a multiple of the demo duration
};

/// Discrete point-attractor DMP (spring-damper + phase-driven forcing term),
/// fitted by locally weighted regression. It has no via-point interface.
struct ClassicalDmp {
  DmpConfig config;
  double duration = 1.0;
  int samples = 0;  // demonstration length
  Vec start;
  Vec goal;
  Vec centers;
  Vec widths;
  Mat weights;               // dim x basis_count
  std::vector<bool> scaled;  // amplitude scaling enabled per dimension

  int dim() const { return static_cast<int>(start.size()); }
};

ClassicalDmp train(std::span<const Vec> positions, double dt, const DmpConfig& config = {});

/// Samples every dt over settle_factor * duration; the first `samples` entries
/// cover the demonstrated time window.
std::vector<Vec> rollout(const ClassicalDmp& dmp, const Vec& new_start, const Vec& new_goal,
                         double dt);

}  // namespace ldmp::dmp
