#include "ldmp/dmp/classical_dmp.hpp"

#include <cmath>
#include <stdexcept>

#include "ldmp/lqt/reference.hpp"

namespace ldmp::dmp {

namespace {

constexpr double kDegenerateSpan = 1e-9;

Vec activations(const ClassicalDmp& dmp, double x) {
  return (-(dmp.widths.array() * (x - dmp.centers.array()).square())).exp().matrix();
}

}  // namespace

ClassicalDmp train(std::span<const Vec> positions, double dt, const DmpConfig& config) {
  if (positions.size() < 3) throw std::invalid_argument("dmp::train: need at least 3 samples");
  if (config.basis_count < 2) throw std::invalid_argument("dmp::train: need >= 2 basis functions");
  const auto demo = lqt::build_reference(positions, dt, positions.back());
  const int n = static_cast<int>(positions.size());
  const int d = demo.dim();
  const int K = config.basis_count;

  ClassicalDmp dmp;
  dmp.config = config;
  dmp.duration = (n - 1) * dt;
  dmp.samples = n;
  dmp.start = positions.front();
  dmp.goal = positions.back();
  dmp.centers.resize(K);
  for (int i = 0; i < K; ++i) dmp.centers[i] = std::exp(-config.alpha_x * i / (K - 1));
  dmp.widths.resize(K);
  for (int i = 0; i < K - 1; ++i) {
    const double gap = dmp.centers[i] - dmp.centers[i + 1];
    dmp.widths[i] = 1.0 / (gap * gap);
  }
  dmp.widths[K - 1] = dmp.widths[K - 2];

  const double tau = dmp.duration;
  const double az = config.alpha_z;
  const double bz = az / 4.0;
  dmp.weights = Mat::Zero(d, K);
  dmp.scaled.assign(d, true);
  for (int j = 0; j < d; ++j) {
    const double amplitude = dmp.goal[j] - dmp.start[j];
    dmp.scaled[j] = std::abs(amplitude) >= kDegenerateSpan;
    Vec num = Vec::Zero(K);
    Vec den = Vec::Zero(K);
    for (int t = 0; t < n; ++t) {
      const auto& s = demo.steps[t];
      const double x = std::exp(-config.alpha_x * t * dt / tau);
      const double f = tau * tau * s.acceleration[j] -
                       az * (bz * (dmp.goal[j] - s.position[j]) - tau * s.velocity[j]);
      const double xi = dmp.scaled[j] ? x * amplitude : x;
      const Vec psi = activations(dmp, x);
      num += psi * (xi * f);
      den += psi * (xi * xi);
    }
    for (int i = 0; i < K; ++i) dmp.weights(j, i) = num[i] / (den[i] + 1e-12);
  }
  return dmp;
}

std::vector<Vec> rollout(const ClassicalDmp& dmp, const Vec& new_start, const Vec& new_goal,
                         double dt) {
  const int d = dmp.dim();
  if (new_start.size() != d || new_goal.size() != d) {
    throw std::invalid_argument("dmp::rollout: dimension mismatch");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("dmp::rollout: dt must be positive");
  const auto& cfg = dmp.config;
  const double tau = dmp.duration;
  const double az = cfg.alpha_z;
  const double bz = az / 4.0;
  const int total = static_cast<int>(std::lround(cfg.settle_factor * tau / dt)) + 1;
  const double h = dt / cfg.substeps;

  Vec y = new_start;
  Vec z = Vec::Zero(d);
  double x = 1.0;
  std::vector<Vec> out;
  out.reserve(total);
  out.push_back(y);
  for (int t = 1; t < total; ++t) {
    for (int k = 0; k < cfg.substeps; ++k) {
      const Vec psi = activations(dmp, x);
      const double norm = psi.sum() + 1e-300;
      for (int j = 0; j < d; ++j) {
        const double xi = dmp.scaled[j] ? x * (new_goal[j] - new_start[j]) : x;
        const double f = dmp.weights.row(j).dot(psi) / norm * xi;
        const double zdot = (az * (bz * (new_goal[j] - y[j]) - z[j]) + f) / tau;
        z[j] += h * zdot;
        y[j] += h * z[j] / tau;
      }
      x += h * (-cfg.alpha_x * x / tau);
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace ldmp::dmp
