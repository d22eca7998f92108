#pragma once

#include <optional>

#include "ldmp/lqt/types.hpp"

namespace ldmp::lqt {

/// Radial basis functions over normalized time, shared by every command
/// dimension. `psi` is (T d) x (K d), block diagonal across dimensions;
/// weight rows are laid out dimension-major (row i*K + k).
struct BasisFamily {
  int count = 12;
  int dim = 2;
  int horizon = 100;
  Vec centers;
  double bandwidth = 0.0;
  Mat psi;

  /// Rows of psi belonging to step t (d x K d).
  Mat step(int t) const { return psi.middleRows(t * dim, dim); }
};

/// bandwidth defaults to 1 / (2 K^2); phi_k(s) = exp(-(s - c_k)^2 / (2 bandwidth)),
/// each column scaled to a unit maximum over the sampled steps.
BasisFamily make_rbf_basis(int count, int dim, int horizon,
                           std::optional<double> bandwidth = std::nullopt);

}  // namespace ldmp::lqt
