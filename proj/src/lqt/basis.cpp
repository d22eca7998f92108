#include "ldmp/lqt/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace ldmp::lqt {

BasisFamily make_rbf_basis(int count, int dim, int horizon, std::optional<double> bandwidth) {
  if (count < 1 || dim < 1 || horizon < 1) {
    throw std::invalid_argument("make_rbf_basis: count, dim and horizon must be >= 1");
  }
  BasisFamily b;
  b.count = count;
  b.dim = dim;
  b.horizon = horizon;
  b.bandwidth = bandwidth.value_or(1.0 / (2.0 * count * count));
  if (!(b.bandwidth > 0.0)) throw std::invalid_argument("make_rbf_basis: bandwidth");
  b.centers = count == 1 ? Vec(Vec::Constant(1, 0.5)) : Vec(Vec::LinSpaced(count, 0.0, 1.0));

  Mat phi(horizon, count);
  for (int t = 0; t < horizon; ++t) {
    const double s = horizon > 1 ? static_cast<double>(t) / (horizon - 1) : 0.0;
    for (int k = 0; k < count; ++k) {
      const double diff = s - b.centers[k];
      phi(t, k) = std::exp(-diff * diff / (2.0 * b.bandwidth));
    }
  }
  for (int k = 0; k < count; ++k) phi.col(k) /= phi.col(k).maxCoeff();

  b.psi = Mat::Zero(horizon * dim, count * dim);
  for (int t = 0; t < horizon; ++t) {
    for (int i = 0; i < dim; ++i) b.psi.block(t * dim + i, i * count, 1, count) = phi.row(t);
  }
  return b;
}

}  // namespace ldmp::lqt
