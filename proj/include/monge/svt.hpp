#pragma once

#include "monge/svd.hpp"
#include "monge/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace monge {

/// Threshold selection for singular value thresholding.
///
/// Scaled mode resolves rho = c * sigma * sqrt(max(n1, n2)) at call time; the
/// square root always uses the larger dimension, matching the convention that
/// inputs are oriented with n1 >= n2 (thresholding itself commutes with
/// transposition, so no physical transpose is needed). The default c = 2 sits
/// just above the operator-norm concentration of square Gaussian noise,
/// sigma (sqrt(n1) + sqrt(n2)).
struct SvtConfig {
  std::optional<double> rho;    ///< explicit threshold; takes precedence when set
  double c = 2.0;               ///< scaled-mode constant
  std::optional<double> sigma;  ///< known noise level, required in scaled mode

  double resolveThreshold(Index n1, Index n2) const {
    if (rho) {
      if (*rho < 0) throw std::invalid_argument("SvtConfig: rho must be nonnegative");
      return *rho;
    }
    if (!sigma) throw std::invalid_argument("SvtConfig: scaled mode requires sigma");
    if (*sigma <= 0 || c <= 0) throw std::invalid_argument("SvtConfig: sigma and c must be positive");
    return c * *sigma * std::sqrt(static_cast<double>(std::max(n1, n2)));
  }
};

namespace detail {

template <typename Scalar, typename Derived>
Matrix<Scalar> svtReconstruct(const Eigen::MatrixBase<Derived>& y, Scalar rho, bool soft) {
  const SvdFactorization<Scalar> svd = fullSvd(y);
  Vector<Scalar> kept = svd.singularValues;
  for (Index i = 0; i < kept.size(); ++i) {
    if (soft) {
      kept(i) = std::max(kept(i) - rho, Scalar(0));
    } else {
      // strictly greater: components tied with the threshold are dropped
      kept(i) = kept(i) > rho ? kept(i) : Scalar(0);
    }
  }
  return svd.leftVectors * kept.asDiagonal() * svd.rightVectors.transpose();
}

}  // namespace detail

/// Hard singular value thresholding: keep the components with lambda_i > rho.
template <typename Derived>
Matrix<typename Derived::Scalar> svtHard(const Eigen::MatrixBase<Derived>& y, const SvtConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  return detail::svtReconstruct<Scalar>(
      y, static_cast<Scalar>(cfg.resolveThreshold(y.rows(), y.cols())), false);
}

/// Soft singular value thresholding: shrink every component to (lambda_i - rho)+.
template <typename Derived>
Matrix<typename Derived::Scalar> svtSoft(const Eigen::MatrixBase<Derived>& y, const SvtConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  return detail::svtReconstruct<Scalar>(
      y, static_cast<Scalar>(cfg.resolveThreshold(y.rows(), y.cols())), true);
}

}  // namespace monge
