#include "ldmp/lqt/controller.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ldmp::lqt {

namespace {

// Per-step blocks of the augmented batch maps: F_t = A~^t (the Sx~ block) and
// G_t = (Su~ Psi) block, i.e. the state response at t to unit weight columns.
struct Responses {
  std::vector<Mat> F;
  std::vector<Mat> G;
};

Responses propagate(const IntegratorModel& model, const BasisFamily& basis) {
  const int T = basis.horizon;
  const int n = model.aug_dim();
  Responses r;
  r.F.reserve(T + 1);
  r.G.reserve(T + 1);
  r.F.push_back(Mat::Identity(n, n));
  r.G.push_back(Mat::Zero(n, basis.psi.cols()));
  for (int t = 0; t < T; ++t) {
    r.F.push_back(model.A_aug * r.F.back());
    r.G.push_back(model.A_aug * r.G.back() + model.B_aug * basis.step(t));
  }
  return r;
}

void check_shapes(const IntegratorModel& model, const BasisFamily& basis,
                  const WeightSchedule& weights) {
  if (basis.dim != model.dim) throw std::invalid_argument("lqt: basis/model dimension mismatch");
  if (basis.horizon != weights.horizon()) {
    throw std::invalid_argument("lqt: basis horizon " + std::to_string(basis.horizon) +
                                " != weight horizon " + std::to_string(weights.horizon()));
  }
  if (!weights.Q.empty() && weights.Q.front().rows() != model.state_dim()) {
    throw std::invalid_argument("lqt: weight/model state dimension mismatch");
  }
}

}  // namespace

ControlPrimitiveController solve_weights(const IntegratorModel& model, const BasisFamily& basis,
                                         const WeightSchedule& weights,
                                         const SolveOptions& options) {
  check_shapes(model, basis, weights);
  const int T = basis.horizon;
  const Responses r = propagate(model, basis);

  // Solve with position targets relative to the terminal target; the
  // integrator is translation invariant, so W is shifted back afterwards.
  // Keeps the affine column small, which matters for near-rest references.
  const int n = model.state_dim();
  Vec anchor = Vec::Zero(n);
  anchor.head(model.dim) = weights.mu.back().head(model.dim);

  const auto cols = basis.psi.cols();
  Mat normal = Mat::Zero(cols, cols);
  Mat rhs = Mat::Zero(cols, model.aug_dim());
  for (int t = 0; t <= T; ++t) {
    const Mat q = augment_precision(weights.Q[t], weights.mu[t] - anchor);
    const Mat gq = r.G[t].transpose() * q;
    normal.noalias() += gq * r.G[t];
    rhs.noalias() += gq * r.F[t];
  }
  for (int t = 0; t < T; ++t) {
    const Mat psi_t = basis.step(t);
    normal.noalias() += psi_t.transpose() * weights.R[t] * psi_t;
  }
  normal = 0.5 * (normal + normal.transpose());

  Eigen::SelfAdjointEigenSolver<Mat> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!std::isfinite(condition) || condition > options.max_condition) {
    std::ostringstream msg;
    msg << "solve_weights: normal matrix condition " << condition << " exceeds "
        << options.max_condition << " (eigenvalues in [" << lo << ", " << hi << "], "
        << cols << " weights)";
    throw ConditioningError(msg.str(), condition);
  }

  // Regularized Cholesky as the factorization, refined against the exact system.
  const double eps = options.regularization * normal.trace();
  const Eigen::LLT<Mat> llt(normal + eps * Mat::Identity(cols, cols));
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("solve_weights: Cholesky factorization failed", condition);
  }
  Mat W = llt.solve(rhs);
  for (int i = 0; i < options.refinement_steps; ++i) W += llt.solve(rhs - normal * W);
  W.col(n) -= W.leftCols(n) * anchor;

  ControlPrimitiveController c;
  c.dim = model.dim;
  c.horizon = T;
  c.W = std::move(W);
  c.condition = condition;
  return c;
}

ControlPrimitiveController derive_gains(ControlPrimitiveController controller,
                                        const IntegratorModel& model, const BasisFamily& basis) {
  if (controller.W.size() == 0) throw std::invalid_argument("derive_gains: weights missing");
  const int T = controller.horizon;
  const int n = model.aug_dim();
  controller.gains.clear();
  controller.propagation.clear();
  controller.gains.reserve(T);
  controller.propagation.reserve(T);

  Mat P = Mat::Identity(n, n);
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const Mat closed = model.A_aug - model.B_aug * controller.gains.back();
      const Eigen::PartialPivLU<Mat> lu(closed);
      const double rcond = lu.rcond();
      if (!(rcond > 1e-14)) {
        throw SingularTransitionError(
            "derive_gains: closed-loop transition singular at step " + std::to_string(t - 1),
            t - 1);
      }
      P = P * lu.inverse();
      if (!P.allFinite()) {
        throw SingularTransitionError(
            "derive_gains: non-finite propagation matrix at step " + std::to_string(t), t);
      }
    }
    controller.propagation.push_back(P);
    controller.gains.push_back(basis.step(t) * controller.W * P);
  }
  return controller;
}

std::vector<Vec> Rollout::positions() const {
  std::vector<Vec> out;
  out.reserve(states.size());
  if (states.empty()) return out;
  const auto d = states.front().size() / 3;
  for (const auto& x : states) out.push_back(x.head(d));
  return out;
}

Rollout rollout(const ControlPrimitiveController& controller, const IntegratorModel& model,
                const Vec& start_state, const std::map<int, Vec>* perturbations) {
  if (!controller.has_gains()) throw std::invalid_argument("rollout: gain schedule missing");
  const int n = model.state_dim();
  if (start_state.size() != n) throw std::invalid_argument("rollout: start state dimension");
  const int T = controller.horizon;

  Rollout out;
  out.states.reserve(T + 1);
  out.commands.reserve(T);
  Vec x(n + 1);
  x << start_state, 1.0;
  auto perturb = [&](int t) {
    if (perturbations == nullptr) return;
    if (auto it = perturbations->find(t); it != perturbations->end()) x.head(n) += it->second;
  };
  for (int t = 0; t < T; ++t) {
    perturb(t);
    out.states.push_back(x.head(n));
    Vec u = -controller.gains[t] * x;
    x = model.A_aug * x + model.B_aug * u;
    out.commands.push_back(std::move(u));
  }
  perturb(T);
  out.states.push_back(x.head(n));
  return out;
}

std::vector<Vec> batch_states(const ControlPrimitiveController& controller,
                              const IntegratorModel& model, const BasisFamily& basis,
                              const Vec& start_state) {
  const Responses r = propagate(model, basis);
  const int n = model.state_dim();
  Vec x0(n + 1);
  x0 << start_state, 1.0;
  const Vec v = controller.W * x0;
  std::vector<Vec> out;
  out.reserve(r.F.size());
  for (std::size_t t = 0; t < r.F.size(); ++t) out.push_back((r.F[t] * x0 - r.G[t] * v).head(n));
  return out;
}

double cost(const WeightSchedule& weights, const Rollout& trajectory) {
  double c = 0.0;
  for (std::size_t t = 0; t < weights.Q.size(); ++t) {
    const Vec e = weights.mu[t] - trajectory.states.at(t);
    c += e.dot(weights.Q[t] * e);
  }
  for (std::size_t t = 0; t < weights.R.size(); ++t) {
    const Vec& u = trajectory.commands.at(t);
    c += u.dot(weights.R[t] * u);
  }
  return c;
}

double primitive_objective(const IntegratorModel& model, const BasisFamily& basis,
                           const WeightSchedule& weights, const Mat& W, const Vec& start_aug) {
  check_shapes(model, basis, weights);
  const Responses r = propagate(model, basis);
  const Vec v = W * start_aug;
  double c = 0.0;
  for (int t = 0; t <= basis.horizon; ++t) {
    const Vec x = r.F[t] * start_aug - r.G[t] * v;
    c += x.dot(weights.augmented(t) * x);
  }
  for (int t = 0; t < basis.horizon; ++t) {
    const Vec u = basis.step(t) * v;
    c += u.dot(weights.R[t] * u);
  }
  return c;
}

MotionResult track_reference(const ReferenceTrajectory& ref, const Vec& start,
                             const LqtConfig& config) {
  const int d = ref.dim();
  const IntegratorModel model = make_integrator(d, ref.dt);
  const BasisFamily basis = make_rbf_basis(config.basis_count, d, ref.horizon());
  MotionResult out;
  out.weights = build_weights(ref, config.weights);
  out.controller = derive_gains(solve_weights(model, basis, out.weights, config.solve), model, basis);
  Vec x0 = Vec::Zero(3 * d);
  x0.head(d) = start;
  out.trajectory = rollout(out.controller, model, x0);
  return out;
}

}  // namespace ldmp::lqt
