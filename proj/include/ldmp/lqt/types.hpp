#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ldmp::lqt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when the weight normal matrix is too ill-conditioned to invert reliably.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Raised when a closed-loop transition (A - B K) cannot be inverted at some step.
class SingularTransitionError : public std::runtime_error {
 public:
  SingularTransitionError(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace ldmp::lqt
