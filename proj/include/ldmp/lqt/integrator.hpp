#pragma once

#include "ldmp/lqt/types.hpp"

namespace ldmp::lqt {

/// Discrete triple integrator: state = [position; velocity; acceleration],
/// command = jerk. The augmented system appends a constant 1 coordinate.
struct IntegratorModel {
  int dim = 2;
  double dt = 0.01;
  Mat A;
  Mat B;
  Mat A_aug;
  Mat B_aug;

  int state_dim() const { return 3 * dim; }
  int aug_dim() const { return 3 * dim + 1; }
};

IntegratorModel make_integrator(int dim, double dt);

/// Trajectory-level maps x = Sx x0 + Su u for a horizon of T commands
/// (T+1 stacked states), and their augmented counterparts.
struct BatchSystemMatrices {
  int horizon = 0;
  Mat Sx;
  Mat Su;
  Mat Sx_aug;
  Mat Su_aug;
};

BatchSystemMatrices build_batch(const IntegratorModel& model, int horizon);

}  // namespace ldmp::lqt
