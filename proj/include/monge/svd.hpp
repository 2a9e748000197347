#pragma once

#include "monge/types.hpp"

#include <Eigen/SVD>

namespace monge {

/// Thin SVD with singular values in conventional nonincreasing order.
template <typename Scalar>
struct SvdFactorization {
  Matrix<Scalar> leftVectors;     ///< orthonormal columns u_i
  Vector<Scalar> singularValues;  ///< nonnegative, nonincreasing
  Matrix<Scalar> rightVectors;    ///< orthonormal columns v_i

  Matrix<Scalar> reconstruct() const {
    return leftVectors * singularValues.asDiagonal() * rightVectors.transpose();
  }
};

template <typename Derived>
SvdFactorization<typename Derived::Scalar> fullSvd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  requireFinite(m, "fullSvd");
  Eigen::BDCSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("fullSvd: SVD iteration did not converge");
  }
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace monge
