#pragma once

#include <map>
#include <vector>

#include "ldmp/lqt/basis.hpp"
#include "ldmp/lqt/integrator.hpp"
#include "ldmp/lqt/weights.hpp"

namespace ldmp::lqt {

struct ControlPrimitiveController {
  int dim = 0;
  int horizon = 0;
  Mat W;                    // K d x (3d + 1)
  std::vector<Mat> gains;   // K~_t, d x (3d + 1), empty until derive_gains
  std::vector<Mat> propagation;  // P_t
  double condition = 0.0;   // of the unregularized normal matrix

  bool has_gains() const { return !gains.empty(); }
};

struct SolveOptions {
  double max_condition = 1e12;
  double regularization = 1e-9;  // times trace of the normal matrix
  int refinement_steps = 3;
};

/// W = (Psi^T Su~^T Q~ Su~ Psi + Psi^T R Psi)^-1 Psi^T Su~^T Q~ Sx~
ControlPrimitiveController solve_weights(const IntegratorModel& model, const BasisFamily& basis,
                                         const WeightSchedule& weights,
                                         const SolveOptions& options = {});

/// K~_t = Psi_t W P_t,  P_t = P_{t-1} (A~ - B~ K~_{t-1})^-1,  P_0 = I.
ControlPrimitiveController derive_gains(ControlPrimitiveController controller,
                                        const IntegratorModel& model, const BasisFamily& basis);

struct Rollout {
  std::vector<Vec> states;    // T+1, 3d each
  std::vector<Vec> commands;  // T, d each

  std::vector<Vec> positions() const;
};

/// Closed-loop rollout u_t = -K~_t [x_t; 1]. An offset registered for step t is
/// added to x_t before the command at t is computed.
Rollout rollout(const ControlPrimitiveController& controller, const IntegratorModel& model,
                const Vec& start_state, const std::map<int, Vec>* perturbations = nullptr);

/// Open-loop batch prediction x~ = (Sx~ - Su~ Psi W) x~0, as stacked states.
std::vector<Vec> batch_states(const ControlPrimitiveController& controller,
                              const IntegratorModel& model, const BasisFamily& basis,
                              const Vec& start_state);

/// (mu - x)^T Q (mu - x) + u^T R u
double cost(const WeightSchedule& weights, const Rollout& trajectory);

/// Objective minimized over W for a given augmented initial state.
double primitive_objective(const IntegratorModel& model, const BasisFamily& basis,
                           const WeightSchedule& weights, const Mat& W, const Vec& start_aug);

/// Everything needed to turn a reference into an executed motion.
struct LqtConfig {
  WeightConfig weights;
  int basis_count = 12;
  SolveOptions solve;
};

struct MotionResult {
  ControlPrimitiveController controller;
  WeightSchedule weights;
  Rollout trajectory;
};

/// Builds weights from `ref` (and its via-points), solves for W, derives the
/// gains and rolls out from rest at `start`.
MotionResult track_reference(const ReferenceTrajectory& ref, const Vec& start,
                             const LqtConfig& config = {});

}  // namespace ldmp::lqt
