#include "ldmp/lqt/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace ldmp::lqt {

std::vector<Vec> ReferenceTrajectory::positions() const {
  std::vector<Vec> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.position);
  return out;
}

ReferenceTrajectory build_reference(std::span<const Vec> positions, double dt, const Vec& goal) {
  if (positions.size() < 3) {
    throw std::invalid_argument("build_reference: need at least 3 samples, got " +
                                std::to_string(positions.size()));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("build_reference: dt must be positive and finite");
  }
  const auto d = goal.size();
  if (!goal.allFinite()) throw std::invalid_argument("build_reference: non-finite goal");
  for (const auto& p : positions) {
    if (p.size() != d) throw std::invalid_argument("build_reference: dimension mismatch");
    if (!p.allFinite()) throw std::invalid_argument("build_reference: non-finite position");
  }

  const std::size_t n = positions.size();
  const std::size_t last = n - 1;
  ReferenceTrajectory ref;
  ref.dt = dt;
  ref.goal = goal;
  ref.steps.resize(n);
  // Written on first differences so constant segments give exact zeros.
  std::vector<Vec> D(last);
  for (std::size_t t = 0; t < last; ++t) D[t] = positions[t + 1] - positions[t];
  const double dt2 = dt * dt;
  for (std::size_t t = 0; t < n; ++t) {
    Sample& s = ref.steps[t];
    s.position = positions[t];
    if (t == 0) {
      s.velocity = (3.0 * D[0] - D[1]) / (2.0 * dt);
    } else if (t == last) {
      s.velocity = (3.0 * D[last - 1] - D[last - 2]) / (2.0 * dt);
    } else {
      s.velocity = (D[t] + D[t - 1]) / (2.0 * dt);
      s.acceleration = (D[t] - D[t - 1]) / dt2;
    }
  }
  if (n >= 4) {
    ref.steps[0].acceleration = (-2.0 * D[0] + 3.0 * D[1] - D[2]) / dt2;
    ref.steps[last].acceleration = (2.0 * D[last - 1] - 3.0 * D[last - 2] + D[last - 3]) / dt2;
  } else {
    ref.steps[0].acceleration = ref.steps[1].acceleration;
    ref.steps[last].acceleration = ref.steps[1].acceleration;
  }
  return ref;
}

std::vector<Vec> resample(std::span<const Vec> positions, int horizon) {
  if (positions.size() < 2 || horizon < 1) {
    throw std::invalid_argument("resample: need >= 2 samples and horizon >= 1");
  }
  std::vector<Vec> out;
  out.reserve(horizon + 1);
  const double span = static_cast<double>(positions.size() - 1);
  for (int t = 0; t <= horizon; ++t) {
    const double s = span * t / horizon;
    const auto i = std::min(static_cast<std::size_t>(s), positions.size() - 2);
    const double a = s - static_cast<double>(i);
    out.push_back((1.0 - a) * positions[i] + a * positions[i + 1]);
  }
  return out;
}

ReferenceTrajectory generalize(const ReferenceTrajectory& ref, const Vec& new_start,
                               const Vec& new_goal, std::span<const ViaPoint> new_via) {
  const auto d = ref.dim();
  if (new_start.size() != d || new_goal.size() != d) {
    throw std::invalid_argument("generalize: dimension mismatch");
  }
  const Vec& old_start = ref.start();
  Vec scale = Vec::Ones(d);
  for (int i = 0; i < d; ++i) {
    const double span = ref.goal[i] - old_start[i];
    if (std::abs(span) >= 1e-9) scale[i] = (new_goal[i] - new_start[i]) / span;
  }
  const Vec shift = new_start - old_start;
  // p' = s + k (p - s0), written so that the identity map is exact bitwise.
  auto map_point = [&](const Vec& p) -> Vec {
    return p + shift + (scale.array() - 1.0).matrix().cwiseProduct(p - old_start);
  };

  ReferenceTrajectory out;
  out.dt = ref.dt;
  out.goal = new_goal;
  out.steps.reserve(ref.steps.size());
  for (const auto& s : ref.steps) {
    out.steps.push_back({map_point(s.position), s.velocity.cwiseProduct(scale),
                         s.acceleration.cwiseProduct(scale)});
  }
  if (!new_via.empty()) {
    out.via.assign(new_via.begin(), new_via.end());
  } else {
    out.via.reserve(ref.via.size());
    for (const auto& v : ref.via) out.via.push_back({v.step, map_point(v.position), v.precision});
  }
  return out;
}

}  // namespace ldmp::lqt
