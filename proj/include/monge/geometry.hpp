#pragma once

#include "monge/diff_ops.hpp"
#include "monge/types.hpp"

#include <algorithm>
#include <vector>

namespace monge {

// The anti-Monge cone M is the set of matrices whose 2x2 second differences
// are all nonnegative. Matrices with a dimension of 1 have no 2x2 blocks and
// are vacuously in the cone.

template <typename Derived>
bool isAntiMonge(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol = 0) {
  if (tol < 0) throw std::invalid_argument("isAntiMonge: tolerance must be nonnegative");
  if (m.rows() < 2 || m.cols() < 2) return true;
  return secondDifference(m).minCoeff() >= -tol;
}

/// Corner formula for the variation seminorm,
/// V(m) = m(0,0) + m(n1-1,n2-1) - m(n1-1,0) - m(0,n2-1).
///
/// Equals the l1 norm of the second differences only on the anti-Monge cone
/// (telescoping); callers off the cone should use variationL1.
template <typename Derived>
typename Derived::Scalar variation(const Eigen::MatrixBase<Derived>& m) {
  return m(0, 0) + m(m.rows() - 1, m.cols() - 1) - m(m.rows() - 1, 0) - m(0, m.cols() - 1);
}

/// l1 norm of all 2x2 second differences; agrees with variation() on the cone
/// and is safe for arbitrary input.
template <typename Derived>
typename Derived::Scalar variationL1(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() < 2 || m.cols() < 2) return 0;
  return secondDifference(m).cwiseAbs().sum();
}

/// Structural split theta = R + S + B with R constant-row, S constant-column
/// (first column zero), and B vanishing on its first row and column.
///
/// The split is exact for any input. When theta is anti-Monge, B is in
/// addition nonnegative, bivariate isotonic, anti-Monge, and its far corner
/// equals V(theta).
template <typename Scalar>
struct MongeDecomposition {
  Matrix<Scalar> R;  ///< constant rows, R(i,j) = theta(i,0)
  Matrix<Scalar> S;  ///< constant columns, S(i,j) = theta(0,j) - theta(0,0)
  Matrix<Scalar> B;  ///< remainder with zero first row and column

  Matrix<Scalar> reconstruct() const { return R + S + B; }
};

template <typename Derived>
MongeDecomposition<typename Derived::Scalar> decompose(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Index r = m.rows();
  const Index c = m.cols();
  MongeDecomposition<Scalar> out;
  out.R = m.col(0).replicate(1, c);
  out.S = (m.row(0).array() - m(0, 0)).matrix().replicate(r, 1);
  out.B = m - out.R - out.S;
  return out;
}

namespace detail {

/// Column cut boundaries for the low-rank construction: segments [e, t) such
/// that each has width at most ceil(n2/r) and bottom-row increment
/// B(n1-1, t-1) - B(n1-1, e) at most V/r. A greedy left-to-right scan meets
/// both constraints with at most 2r segments; width-1 segments always fit, so
/// the scan cannot stall.
template <typename Scalar>
std::vector<Index> greedyColumnCuts(const Matrix<Scalar>& B, Scalar V, Index r) {
  const Index n1 = B.rows();
  const Index n2 = B.cols();
  const Index maxWidth = (n2 + r - 1) / r;
  const Scalar budget = V / static_cast<Scalar>(r);
  std::vector<Index> cuts{0};
  Index e = 0;
  while (e < n2) {
    Index t = e + 1;
    while (t < n2 && t - e < maxWidth && B(n1 - 1, t) - B(n1 - 1, e) <= budget) ++t;
    cuts.push_back(t);
    e = t;
  }
  return cuts;
}

}  // namespace detail

/// Constructive approximation of an anti-Monge matrix by a matrix of rank at
/// most 3r+3 with squared Frobenius error at most 2 n1 n2 V(m)^2 / r^3.
///
/// R and S come from the structural split; X pins each column of B to the
/// leftmost column of its column block, Y pins each row of B - X to the top
/// row of its row block. Row blocks are the r+1 groups
/// (0, floor(n1/r), 2 floor(n1/r), ..., n1); column blocks come from the
/// greedy scan above.
template <typename Derived>
Matrix<typename Derived::Scalar> lowRankApprox(const Eigen::MatrixBase<Derived>& m, Index r) {
  using Scalar = typename Derived::Scalar;
  if (r < 1) throw std::invalid_argument("lowRankApprox: rank parameter must be at least 1");
  const Index n1 = m.rows();
  const Index n2 = m.cols();
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("lowRankApprox: empty matrix");

  const MongeDecomposition<Scalar> dec = decompose(m);
  const Matrix<Scalar>& B = dec.B;
  const Scalar V = B(n1 - 1, n2 - 1);

  std::vector<Index> rowCuts{0};
  const Index step = std::max<Index>(n1 / r, 1);
  for (Index k = 1; k <= r; ++k) rowCuts.push_back(std::min(k * step, n1));
  rowCuts.push_back(n1);

  const std::vector<Index> colCuts = detail::greedyColumnCuts(B, std::max<Scalar>(V, 0), r);

  Matrix<Scalar> X(n1, n2);
  for (size_t l = 0; l + 1 < colCuts.size(); ++l) {
    for (Index j = colCuts[l]; j < colCuts[l + 1]; ++j) X.col(j) = B.col(colCuts[l]);
  }

  Matrix<Scalar> Y(n1, n2);
  const Matrix<Scalar> BX = B - X;
  for (size_t k = 0; k + 1 < rowCuts.size(); ++k) {
    if (rowCuts[k] == rowCuts[k + 1]) continue;
    for (Index i = rowCuts[k]; i < rowCuts[k + 1]; ++i) Y.row(i) = BX.row(rowCuts[k]);
  }

  return dec.R + dec.S + X + Y;
}

/// The anti-Monge matrix (v0/n) Dpinv Dpinv^T whose second difference is
/// (v0/n) I; its eigenvalues decay exactly like the inverse squared singular
/// values of D, which makes the lowRankApprox rate tight.
template <typename Scalar = double>
Matrix<Scalar> worstCaseMatrix(Index n, Scalar v0) {
  if (n < 2) throw std::invalid_argument("worstCaseMatrix: n must be at least 2");
  if (v0 <= 0) throw std::invalid_argument("worstCaseMatrix: v0 must be positive");
  const Matrix<Scalar> pinv = diffPinv<Scalar>(n);
  return (v0 / static_cast<Scalar>(n)) * (pinv * pinv.transpose());
}

}  // namespace monge
