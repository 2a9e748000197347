#pragma once

#include "monge/projection.hpp"
#include "monge/sorting.hpp"
#include "monge/types.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace monge {

/// Permutation-approximation error: the normalized squared Frobenius distance
/// between thetaStar relabeled by the estimated permutations and thetaStar
/// itself, minimized over composing either estimate with its global reversal.
/// The reversal minimum is what makes the quantity identifiable: variance
/// sorting can only pin an order up to a flip.
template <typename Derived>
typename Derived::Scalar permApproxError(const Eigen::MatrixBase<Derived>& thetaStar,
                                         const Permutation& p1Hat, const Permutation& p2Hat) {
  using Scalar = typename Derived::Scalar;
  if (p1Hat.size() != thetaStar.rows() || p2Hat.size() != thetaStar.cols()) {
    throw std::invalid_argument("permApproxError: permutation sizes do not match matrix shape");
  }
  const Permutation rev1 = Permutation::reversal(thetaStar.rows());
  const Permutation rev2 = Permutation::reversal(thetaStar.cols());
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (int f1 = 0; f1 < 2; ++f1) {
    const Permutation q1 = f1 ? compose(rev1, p1Hat) : p1Hat;
    for (int f2 = 0; f2 < 2; ++f2) {
      const Permutation q2 = f2 ? compose(rev2, p2Hat) : p2Hat;
      const Scalar err = (applyPermutations(thetaStar, q1, q2) - thetaStar).squaredNorm();
      best = std::min(best, err);
    }
  }
  return best / static_cast<Scalar>(thetaStar.rows() * thetaStar.cols());
}

template <typename Scalar>
struct MainAlgorithmResult {
  Matrix<Scalar> estimate;  ///< aligned with y (estimates the permuted ground truth)
  bool converged = false;   ///< both orientation projections converged
  bool rowFlipChosen = false;
  Scalar chosenResidual = 0;  ///< squared Frobenius fit of the winning orientation
  Scalar otherResidual = 0;
  long sweepsUsed = 0;  ///< total over both projections
  Permutation rowOrder = Permutation::identity(0);
  Permutation colOrder = Permutation::identity(0);
};

/// Variance sorting on rows and columns followed by least squares over the
/// cone along the estimated orders.
///
/// Rows of y are sorted by varianceSort(y), columns by varianceSort(y^T).
/// Because the anchor orientation is arbitrary, the sorted matrix is projected
/// under both the estimated row order and its reversal; the orientation with
/// the smaller fit wins, and the projection is permuted back into y's frame.
/// When v0 is set both projections run onto the variation-capped cone.
template <typename Derived>
MainAlgorithmResult<typename Derived::Scalar> mainAlgorithm(
    const Eigen::MatrixBase<Derived>& y, std::optional<double> v0, const DykstraConfig& cfg = {}) {
  using Scalar = typename Derived::Scalar;
  if (y.rows() < 2 || y.cols() < 2) throw std::invalid_argument("mainAlgorithm: matrix too small");
  if (v0 && *v0 < 0) throw std::invalid_argument("mainAlgorithm: v0 must be nonnegative");

  DykstraConfig proj = cfg;
  proj.vMax = v0 ? v0 : cfg.vMax;

  MainAlgorithmResult<Scalar> out;
  out.rowOrder = varianceSort(y).piHat;
  out.colOrder = varianceSort(y.transpose()).piHat;

  const Permutation rowOrderRev = compose(out.rowOrder, Permutation::reversal(y.rows()));

  const Matrix<Scalar> sorted = applyPermutations(y, out.rowOrder, out.colOrder);
  const Matrix<Scalar> sortedFlip = applyPermutations(y, rowOrderRev, out.colOrder);

  const ProjectionResult<Scalar> fit = projectAntiMonge(sorted, proj);
  const ProjectionResult<Scalar> fitFlip = projectAntiMonge(sortedFlip, proj);
  out.converged = fit.converged && fitFlip.converged;
  out.sweepsUsed = fit.sweepsUsed + fitFlip.sweepsUsed;

  const Scalar res = (fit.estimate - sorted).squaredNorm();
  const Scalar resFlip = (fitFlip.estimate - sortedFlip).squaredNorm();
  out.rowFlipChosen = resFlip < res;
  out.chosenResidual = out.rowFlipChosen ? resFlip : res;
  out.otherResidual = out.rowFlipChosen ? res : resFlip;

  const Permutation& rows = out.rowFlipChosen ? rowOrderRev : out.rowOrder;
  const Matrix<Scalar>& proj_est = out.rowFlipChosen ? fitFlip.estimate : fit.estimate;
  out.estimate = applyPermutations(proj_est, rows.inverse(), out.colOrder.inverse());
  return out;
}

template <typename Scalar>
struct GlsResult {
  Matrix<Scalar> estimate;  ///< aligned with y
  Scalar residual = 0;      ///< globally minimal squared Frobenius fit
  bool converged = false;
  Permutation rows = Permutation::identity(0);
  Permutation cols = Permutation::identity(0);
};

/// Global least squares by brute force: project y under every pair of
/// row/column orders onto the (optionally capped) cone and keep the smallest
/// residual. Exact at toy scale only; the n1! n2! <= 10000 guard keeps it
/// there. Serves as an oracle lower bound for mainAlgorithm's residual.
template <typename Derived>
GlsResult<typename Derived::Scalar> bruteForceGls(const Eigen::MatrixBase<Derived>& y,
                                                  std::optional<double> v0,
                                                  const DykstraConfig& cfg = {}) {
  using Scalar = typename Derived::Scalar;
  const Index n1 = y.rows();
  const Index n2 = y.cols();
  double budget = 1;
  for (Index i = 2; i <= n1; ++i) budget *= static_cast<double>(i);
  for (Index i = 2; i <= n2; ++i) budget *= static_cast<double>(i);
  if (budget > 10000) throw std::invalid_argument("bruteForceGls: n1! * n2! exceeds 10000");
  if (v0 && *v0 < 0) throw std::invalid_argument("bruteForceGls: v0 must be nonnegative");

  DykstraConfig proj = cfg;
  proj.vMax = v0 ? v0 : cfg.vMax;

  GlsResult<Scalar> out;
  out.residual = std::numeric_limits<Scalar>::infinity();
  out.converged = true;

  std::vector<Index> p1(static_cast<size_t>(n1)), p2(static_cast<size_t>(n2));
  std::iota(p1.begin(), p1.end(), Index(0));
  do {
    std::iota(p2.begin(), p2.end(), Index(0));
    do {
      const Permutation rows{std::vector<Index>(p1)};
      const Permutation cols{std::vector<Index>(p2)};
      const Matrix<Scalar> permuted = applyPermutations(y, rows, cols);
      const ProjectionResult<Scalar> fit = projectAntiMonge(permuted, proj);
      out.converged = out.converged && fit.converged;
      const Scalar res = (fit.estimate - permuted).squaredNorm();
      if (res < out.residual) {
        out.residual = res;
        out.estimate = applyPermutations(fit.estimate, rows.inverse(), cols.inverse());
        out.rows = rows;
        out.cols = cols;
      }
    } while (std::next_permutation(p2.begin(), p2.end()));
  } while (std::next_permutation(p1.begin(), p1.end()));
  return out;
}

}  // namespace monge
