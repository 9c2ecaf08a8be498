#pragma once

#include <Eigen/Core>
#include <cmath>

#include "swarmnes/errors.hpp"

namespace swarmnes {

// Matrix exponential by scaling and squaring: the argument is halved until
// its induced 1-norm is <= 0.5, run through an 18-term Taylor series, then
// squared back up. At that norm the series truncation error is far below
// double rounding, and for trace-free arguments det(exp(m)) stays within
// 1e-9 of 1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime,
              Derived::ColsAtCompileTime>
expm(const Eigen::MatrixBase<Derived>& arg) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Derived::RowsAtCompileTime,
                            Derived::ColsAtCompileTime>;

  Mat m = arg;
  if (m.rows() != m.cols()) {
    throw NumericError("expm: matrix must be square");
  }
  if (!m.allFinite()) {
    throw NumericError("expm: non-finite matrix entry");
  }

  const double norm1 = static_cast<double>(m.cwiseAbs().colwise().sum().maxCoeff());
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    m *= Scalar(std::ldexp(1.0, -squarings));
  }

  Mat term = Mat::Identity(m.rows(), m.cols());
  Mat sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (term * m) / Scalar(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  return sum;
}

}  // namespace swarmnes
