#pragma once

#include "monge/diff_ops.hpp"
#include "monge/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <vector>

namespace monge {

/// Pairwise variance statistic between rows:
/// xi(i,j) = sum_k [y(i,k) - y(j,k) - mean_k(y(i,.) - y(j,.))]^2.
///
/// Equivalently the squared distance between row-centered rows, which is how
/// it is computed (one Gram product instead of n1^2 row scans). Adding any
/// constant-row or constant-column matrix to y leaves xi unchanged, which is
/// the whole point: first-order (row sum) information carries nothing here.
template <typename Derived>
Matrix<typename Derived::Scalar> xiStatistic(const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  if (y.cols() < 2) throw std::invalid_argument("xiStatistic: need at least 2 columns");
  requireFinite(y, "xiStatistic");
  Matrix<Scalar> centered = y;
  centered.colwise() -= centered.rowwise().mean().eval();
  const Matrix<Scalar> gram = centered * centered.transpose();
  const Index n = y.rows();
  Matrix<Scalar> xi(n, n);
  for (Index i = 0; i < n; ++i) {
    xi(i, i) = 0;
    for (Index j = i + 1; j < n; ++j) {
      const Scalar v = std::max(gram(i, i) + gram(j, j) - 2 * gram(i, j), Scalar(0));
      xi(i, j) = v;
      xi(j, i) = v;
    }
  }
  return xi;
}

/// Output of the variance-sorting pass over rows.
template <typename Scalar>
struct VarianceSortOutput {
  Permutation piHat;        ///< piHat(k) = row index with k-th smallest xi(anchorLow, .)
  Index anchorLow = 0;      ///< i0 of the maximizing pair, i0 < j0
  Index anchorHigh = 0;     ///< j0
  Matrix<Scalar> xi;        ///< the full pairwise statistic

  VarianceSortOutput() : piHat(Permutation::identity(0)) {}
};

/// Order rows by their variance distance from an extremal anchor row.
///
/// The anchor pair (i0, j0) is the lexicographically first argmax of xi over
/// i < j; rows are then stably sorted by xi(i0, .) nondecreasing, so row i0
/// comes first (xi(i0,i0) = 0) and, when the maximum is unique, j0 lands last.
/// applyPermutations(y, piHat, identity) is the sorted matrix. With exact ties
/// the stable sort keeps the original relative order.
template <typename Derived>
VarianceSortOutput<typename Derived::Scalar> varianceSort(const Eigen::MatrixBase<Derived>& y) {
  using Scalar = typename Derived::Scalar;
  if (y.rows() < 2 || y.cols() < 2) throw std::invalid_argument("varianceSort: matrix too small");
  VarianceSortOutput<Scalar> out;
  out.xi = xiStatistic(y);
  const Index n = y.rows();

  Scalar best = -1;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (out.xi(i, j) > best) {
        best = out.xi(i, j);
        out.anchorLow = i;
        out.anchorHigh = j;
      }
    }
  }

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  const Index i0 = out.anchorLow;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return out.xi(i0, a) < out.xi(i0, b); });
  out.piHat = Permutation(std::move(order));
  return out;
}

/// Pairwise squared row distances f(i,j) = sum_k (theta(i,k) - theta(j,k))^2
/// of a double-centered matrix. On a centered anti-Monge matrix f is
/// superadditive along the row order: f(i,m) + f(m,j) <= f(i,j) for i<=m<=j,
/// and E[xi(i,j)] = f(i,j) + 2(n2-1) sigma^2 under iid noise with variance
/// sigma^2.
template <typename Derived>
Matrix<typename Derived::Scalar> rowDiscrepancy(const Eigen::MatrixBase<Derived>& theta,
                                                typename Derived::Scalar centeringTol = -1) {
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max<Scalar>(Scalar(1), theta.cwiseAbs().maxCoeff());
  if (centeringTol < 0) centeringTol = Scalar(1e-8) * scale * static_cast<Scalar>(std::max(theta.rows(), theta.cols()));
  if (theta.rowwise().sum().cwiseAbs().maxCoeff() > centeringTol ||
      theta.colwise().sum().cwiseAbs().maxCoeff() > centeringTol) {
    throw std::invalid_argument("rowDiscrepancy: input rows/columns are not centered");
  }
  const Matrix<Scalar> gram = theta * theta.transpose();
  const Index n = theta.rows();
  Matrix<Scalar> f(n, n);
  for (Index i = 0; i < n; ++i) {
    f(i, i) = 0;
    for (Index j = i + 1; j < n; ++j) {
      const Scalar v = std::max(gram(i, i) + gram(j, j) - 2 * gram(i, j), Scalar(0));
      f(i, j) = v;
      f(j, i) = v;
    }
  }
  return f;
}

/// Seriation by the leading eigenvector: double-center the (symmetric) input,
/// take the eigenvector of the largest eigenvalue, and return the permutation
/// that sorts its entries ascending. For a doubly centered anti-Monge matrix
/// that eigenvector is monotone, so sorting it recovers the latent order; the
/// eigenvector sign is arbitrary, callers must compare up to reversal.
template <typename Derived>
Permutation spectralOrder(const Eigen::MatrixBase<Derived>& gram) {
  using Scalar = typename Derived::Scalar;
  if (gram.rows() != gram.cols()) throw std::invalid_argument("spectralOrder: matrix must be square");
  const Index n = gram.rows();
  if (n == 1) return Permutation::identity(1);
  const Scalar scale = std::max<Scalar>(Scalar(1), gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9) * scale) {
    throw std::invalid_argument("spectralOrder: matrix must be symmetric");
  }
  const Matrix<Scalar> centered = doubleCenter(gram);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(centered);
  if (eig.info() != Eigen::Success) throw std::runtime_error("spectralOrder: eigendecomposition failed");
  const Vector<Scalar> leading = eig.eigenvectors().col(n - 1);  // eigenvalues ascending in Eigen

  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return leading(a) < leading(b); });
  return Permutation(std::move(order));
}

}  // namespace monge
