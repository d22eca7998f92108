#include "ldmp/lqt/integrator.hpp"

#include <stdexcept>

namespace ldmp::lqt {

IntegratorModel make_integrator(int dim, double dt) {
  if (dim < 1 || !(dt > 0.0)) throw std::invalid_argument("make_integrator: bad dim or dt");
  IntegratorModel m;
  m.dim = dim;
  m.dt = dt;
  const Mat I = Mat::Identity(dim, dim);
  const int n = 3 * dim;
  m.A = Mat::Identity(n, n);
  m.A.block(0, dim, dim, dim) = dt * I;
  m.A.block(0, 2 * dim, dim, dim) = 0.5 * dt * dt * I;
  m.A.block(dim, 2 * dim, dim, dim) = dt * I;
  m.B = Mat::Zero(n, dim);
  m.B.block(0, 0, dim, dim) = (dt * dt * dt / 6.0) * I;
  m.B.block(dim, 0, dim, dim) = 0.5 * dt * dt * I;
  m.B.block(2 * dim, 0, dim, dim) = dt * I;

  m.A_aug = Mat::Zero(n + 1, n + 1);
  m.A_aug.topLeftCorner(n, n) = m.A;
  m.A_aug(n, n) = 1.0;
  m.B_aug = Mat::Zero(n + 1, dim);
  m.B_aug.topRows(n) = m.B;
  return m;
}

namespace {

void fill_batch(const Mat& A, const Mat& B, int horizon, Mat& Sx, Mat& Su) {
  const auto n = A.rows();
  const auto d = B.cols();
  Sx = Mat::Zero((horizon + 1) * n, n);
  Su = Mat::Zero((horizon + 1) * n, horizon * d);
  Sx.topRows(n) = Mat::Identity(n, n);
  for (int t = 1; t <= horizon; ++t) {
    Sx.middleRows(t * n, n) = A * Sx.middleRows((t - 1) * n, n);
    Su.block(t * n, 0, n, (t - 1) * d) = A * Su.block((t - 1) * n, 0, n, (t - 1) * d);
    Su.block(t * n, (t - 1) * d, n, d) = B;
  }
}

}  // namespace

BatchSystemMatrices build_batch(const IntegratorModel& model, int horizon) {
  if (horizon < 1) throw std::invalid_argument("build_batch: horizon must be >= 1");
  BatchSystemMatrices b;
  b.horizon = horizon;
  fill_batch(model.A, model.B, horizon, b.Sx, b.Su);
  fill_batch(model.A_aug, model.B_aug, horizon, b.Sx_aug, b.Su_aug);
  return b;
}

}  // namespace ldmp::lqt
