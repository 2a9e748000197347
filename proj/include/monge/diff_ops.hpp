#pragma once

#include "monge/types.hpp"

#include <cmath>
#include <numbers>

namespace monge {

// The (n-1) x n forward-difference operator
//
//       [-1  1        ]
//   D = [   -1  1     ]
//       [       ...   ]
//       [      -1   1 ]
//
// never appears as a stored matrix in library code; conjugation by it is the
// 2x2 second-difference stencil below, and its pseudoinverse comes from a
// tridiagonal solve. Tests materialize D explicitly as an oracle.

/// All contiguous 2x2 second differences of m:
/// out(i,j) = m(i,j) + m(i+1,j+1) - m(i,j+1) - m(i+1,j), an (n1-1) x (n2-1) matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> secondDifference(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() < 2 || m.cols() < 2) {
    throw std::invalid_argument("secondDifference: both dimensions must be at least 2");
  }
  const Index r = m.rows() - 1;
  const Index c = m.cols() - 1;
  return m.block(0, 0, r, c) + m.block(1, 1, r, c) - m.block(0, 1, r, c) - m.block(1, 0, r, c);
}

/// Moore-Penrose pseudoinverse of D, an n x (n-1) matrix with
/// D * diffPinv(n) = I and diffPinv(n) * D = I - (1/n) 1 1^T.
///
/// Computed as D^T (D D^T)^{-1}; D D^T is the tridiagonal (-1, 2, -1) matrix,
/// so each column is a Thomas solve and the whole thing costs O(n^2).
template <typename Scalar = double>
Matrix<Scalar> diffPinv(Index n) {
  if (n < 2) throw std::invalid_argument("diffPinv: n must be at least 2");
  const Index m = n - 1;

  // Forward-elimination pivots of tridiag(-1, 2, -1): w_i = 2 - 1/w_{i-1}.
  Vector<Scalar> w(m);
  w(0) = Scalar(2);
  for (Index i = 1; i < m; ++i) w(i) = Scalar(2) - Scalar(1) / w(i - 1);

  // Solve (D D^T) X = I column by column.
  Matrix<Scalar> x(m, m);
  Vector<Scalar> g(m);
  for (Index j = 0; j < m; ++j) {
    g(0) = (j == 0 ? Scalar(1) : Scalar(0)) / w(0);
    for (Index i = 1; i < m; ++i) g(i) = ((i == j ? Scalar(1) : Scalar(0)) + g(i - 1)) / w(i);
    x(m - 1, j) = g(m - 1);
    for (Index i = m - 2; i >= 0; --i) x(i, j) = g(i) + x(i + 1, j) / w(i);
  }

  // D^T X: row k of the result is X_{k-1,.} - X_{k,.} with out-of-range rows zero.
  Matrix<Scalar> pinv(n, m);
  pinv.row(0) = -x.row(0);
  for (Index k = 1; k < m; ++k) pinv.row(k) = x.row(k - 1) - x.row(k);
  pinv.row(n - 1) = x.row(m - 1);
  return pinv;
}

/// The n-1 nonzero singular values of D, 2 sin(pi i / (2n)) for i = 1..n-1.
///
/// Returned ascending (the natural order of the closed form); note that data
/// SVDs elsewhere in the library use the conventional descending order.
template <typename Scalar = double>
Vector<Scalar> dSingularValues(Index n) {
  if (n < 2) throw std::invalid_argument("dSingularValues: n must be at least 2");
  Vector<Scalar> sv(n - 1);
  for (Index i = 1; i < n; ++i) {
    sv(i - 1) = Scalar(2) * std::abs(std::sin(std::numbers::pi_v<double> * static_cast<double>(i) /
                                              (2.0 * static_cast<double>(n))));
  }
  return sv;
}

/// Remove row means, column means and add back the grand mean, leaving every
/// row sum and column sum zero.
template <typename Derived>
Matrix<typename Derived::Scalar> doubleCenter(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = m;
  const Vector<Scalar> rowMeans = out.rowwise().mean();
  const Vector<Scalar> colMeans = out.colwise().mean().transpose();
  const Scalar grand = out.mean();
  out.colwise() -= rowMeans;
  out.rowwise() -= colMeans.transpose();
  out.array() += grand;
  return out;
}

}  // namespace monge
