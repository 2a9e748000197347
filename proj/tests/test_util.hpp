#pragma once

// Shared oracle helpers for the test suites. Everything here is deliberately
// naive and independent of the library's computation paths.

#include "monge/monge.hpp"

#include <Eigen/QR>

#include <vector>

namespace testutil {

using monge::Index;
using monge::MatrixXd;
using monge::VectorXd;

/// The forward-difference operator as an explicit (n-1) x n matrix.
inline MatrixXd materializeD(Index n) {
  MatrixXd d = MatrixXd::Zero(n - 1, n);
  for (Index i = 0; i + 1 < n; ++i) {
    d(i, i) = -1;
    d(i, i + 1) = 1;
  }
  return d;
}

/// Entry-by-entry relabeling, the definition the fast path must match.
inline MatrixXd naiveApplyPermutations(const MatrixXd& m, const monge::Permutation& p1,
                                       const monge::Permutation& p2) {
  MatrixXd out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(p1(i), p2(j));
  }
  return out;
}

inline MatrixXd randomMatrix(Index n1, Index n2, monge::SeededRng& rng, double scale = 1.0) {
  MatrixXd m(n1, n2);
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) m(i, j) = scale * (2.0 * rng.nextUniform() - 1.0);
  }
  return m;
}

inline MatrixXd randomGaussianMatrix(Index n1, Index n2, monge::SeededRng& rng, double scale = 1.0) {
  MatrixXd m(n1, n2);
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) m(i, j) = scale * rng.nextGaussian();
  }
  return m;
}

/// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix.
inline MatrixXd randomOrthogonal(Index n, monge::SeededRng& rng) {
  const MatrixXd g = randomGaussianMatrix(n, n, rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  // fix the sign convention so Q is a deterministic function of g
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

/// Straight normal-equations least squares for log y on log x.
inline double naiveLoglogSlope(const std::vector<std::pair<double, double>>& pts) {
  const auto n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testutil
