#include <cmath>

#include "doctest.h"
#include "ldmp/dmp/classical_dmp.hpp"
#include "support/lqt_oracles.hpp"

using namespace ldmp::dmp;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

double path_length(const std::vector<Vec>& p) {
  double L = 0;
  for (std::size_t i = 1; i < p.size(); ++i) L += (p[i] - p[i - 1]).norm();
  return L;
}

}  // namespace

TEST_CASE("straight-line demo converges to its goal") {
  std::vector<Vec> line;
  for (int t = 0; t <= 100; ++t) line.push_back(v2(0.2, 0.1) + (t / 100.0) * v2(0.3, 0.2));
  auto dmp = train(line, 0.01);
  auto out = rollout(dmp, line.front(), line.back(), 0.01);
  CHECK((out.back() - line.back()).norm() < 1e-3);
}

TEST_CASE("self reconstruction within 2% of path length") {
  auto demo = oracle::smooth_demo(100, v2(0.2, 0.1), v2(0.5, 0.3), 0.1);
  auto dmp = train(demo, 0.01);
  auto out = rollout(dmp, demo.front(), demo.back(), 0.01);
  REQUIRE(out.size() >= demo.size());
  double se = 0;
  for (std::size_t t = 0; t < demo.size(); ++t) se += (out[t] - demo[t]).squaredNorm();
  const double rmse = std::sqrt(se / demo.size());
  CHECK(rmse < 0.02 * path_length(demo));
  CHECK((out.back() - demo.back()).norm() < 1e-3);
}

TEST_CASE("rollout is deterministic for identical inputs") {
  auto demo = oracle::smooth_demo(80, v2(0.0, 0.0), v2(0.3, -0.1), 0.05);
  auto dmp = train(demo, 0.01);
  auto a = rollout(dmp, dmp.start, dmp.goal, 0.01);
  auto b = rollout(dmp, dmp.start, dmp.goal, 0.01);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("endpoint convergence for goals within 3x the span") {
  auto demo = oracle::smooth_demo(100, v2(0.2, 0.1), v2(0.5, 0.3), 0.1);
  auto dmp = train(demo, 0.01);
  const Vec span = dmp.goal - dmp.start;
  for (double sx : {-3.0, -1.0, 0.5, 2.0, 3.0}) {
    for (double sy : {-3.0, 1.0, 3.0}) {
      const Vec g = dmp.start + v2(sx * span[0], sy * span[1]);
      auto out = rollout(dmp, dmp.start, g, 0.01);
      CHECK((out.back() - g).norm() < 1e-3);
    }
  }
}

TEST_CASE("zero span collapses to the fixed point") {
  auto demo = oracle::smooth_demo(100, v2(0.2, 0.1), v2(0.5, 0.3), 0.1);
  auto dmp = train(demo, 0.01);
  const Vec p = v2(0.4, 0.4);
  auto out = rollout(dmp, p, p, 0.01);
  CHECK((out.back() - p).norm() < 1e-3);
}

TEST_CASE("degenerate demonstration disables amplitude scaling") {
  // closed loop: start == goal in both dimensions
  std::vector<Vec> loop;
  for (int t = 0; t <= 100; ++t) {
    const double s = std::sin(M_PI * t / 100.0);
    loop.push_back(v2(0.3 + 0.1 * s * s, 0.2));
  }
  auto dmp = train(loop, 0.01);
  CHECK_FALSE(dmp.scaled[0]);
  CHECK_FALSE(dmp.scaled[1]);
  CHECK(dmp.weights.allFinite());
  auto out = rollout(dmp, v2(0.0, 0.0), v2(0.0, 0.0), 0.01);
  // translated copy of the bump, then back to the attractor
  double peak = 0;
  for (const auto& p : out) peak = std::max(peak, p[0]);
  CHECK(peak > 0.05);
  CHECK(out.back().norm() < 1e-3);
}

TEST_CASE("train rejects short demos") {
  std::vector<Vec> two{v2(0, 0), v2(1, 1)};
  CHECK_THROWS_AS(train(two, 0.01), std::invalid_argument);
}
