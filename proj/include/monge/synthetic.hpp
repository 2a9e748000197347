#pragma once

#include "monge/diff_ops.hpp"
#include "monge/rng.hpp"
#include "monge/types.hpp"

#include <cmath>

namespace monge {

/// Blockwise-constant rank-one ground truth: with k = (v n / sigma)^{1/3},
/// theta(i,j) = (v / floor(k)^2) floor(i k/(n-1)) floor(j k/(n-1)) on 0-based
/// indices, i.e. the outer product of a nondecreasing staircase with itself.
/// k enters the floors un-rounded; the prefactor uses floor(k)^2. Requires
/// floor(k) >= 1 (v n / sigma >= 1); degenerate inputs are rejected rather
/// than patched.
template <typename Scalar = double>
Matrix<Scalar> genTheta1Raw(Index n, Scalar v, Scalar sigma) {
  if (n < 2) throw std::invalid_argument("genTheta1: n must be at least 2");
  if (v <= 0 || sigma <= 0) throw std::invalid_argument("genTheta1: v and sigma must be positive");
  const double k = std::cbrt(static_cast<double>(v) * static_cast<double>(n) / static_cast<double>(sigma));
  const double kf = std::floor(k);
  if (kf < 1) throw std::invalid_argument("genTheta1: floor((v n / sigma)^(1/3)) must be at least 1");

  Vector<Scalar> stair(n);
  for (Index i = 0; i < n; ++i) {
    stair(i) = static_cast<Scalar>(std::floor(static_cast<double>(i) * k / static_cast<double>(n - 1)));
  }
  const Scalar scale = v / static_cast<Scalar>(kf * kf);
  return scale * (stair * stair.transpose());
}

/// genTheta1Raw, double-centered to zero row and column sums. Centering only
/// adds constant-row/constant-column components, so the result stays
/// anti-Monge.
template <typename Scalar = double>
Matrix<Scalar> genTheta1(Index n, Scalar v, Scalar sigma) {
  return doubleCenter(genTheta1Raw<Scalar>(n, v, sigma));
}

/// Ground truth with the slowest admissible singular value decay:
/// (v/(n-1)) Dpinv Dpinv^T. Its second difference is (v/(n-1)) I, so it is
/// anti-Monge with variation v, symmetric, and doubly centered (the columns of
/// Dpinv sum to zero).
template <typename Scalar = double>
Matrix<Scalar> genTheta2(Index n, Scalar v) {
  if (n < 2) throw std::invalid_argument("genTheta2: n must be at least 2");
  if (v <= 0) throw std::invalid_argument("genTheta2: v must be positive");
  const Matrix<Scalar> pinv = diffPinv<Scalar>(n);
  return (v / static_cast<Scalar>(n - 1)) * (pinv * pinv.transpose());
}

/// iid centered Gaussian entries with standard deviation sigma. ("Standard
/// deviation", not variance: the noise level parameter is sigma throughout
/// the toolkit.) Entries are drawn in column-major storage order, so a given
/// (seed, stream) always produces the same matrix.
template <typename Scalar = double>
Matrix<Scalar> gaussianNoise(Index n1, Index n2, Scalar sigma, SeededRng& rng) {
  if (sigma <= 0) throw std::invalid_argument("gaussianNoise: sigma must be positive");
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("gaussianNoise: dimensions must be positive");
  Matrix<Scalar> out(n1, n2);
  Scalar* p = out.data();
  for (Index i = 0; i < n1 * n2; ++i) p[i] = sigma * static_cast<Scalar>(rng.nextGaussian());
  return out;
}

template <typename Scalar>
struct RandomAntiMongeResult {
  Matrix<Scalar> matrix;        ///< cone member with random ker-D components added
  Scalar variation;             ///< the known V, equal to the sum of drawn increments
  Matrix<Scalar> isotonicCore;  ///< the doubly integrated part B (zero first row/column)
};

/// Random anti-Monge matrix with known variation: draw nonnegative second
/// differences iid U[0, scale], integrate them twice into a bivariate
/// isotonic core B with zero first row and column, then add random
/// constant-row and constant-column matrices (invisible to the cone).
template <typename Scalar = double>
RandomAntiMongeResult<Scalar> randomAntiMonge(Index n1, Index n2, Scalar scale, SeededRng& rng) {
  if (n1 < 2 || n2 < 2) throw std::invalid_argument("randomAntiMonge: dimensions must be at least 2");
  if (scale <= 0) throw std::invalid_argument("randomAntiMonge: scale must be positive");

  Matrix<Scalar> increments(n1 - 1, n2 - 1);
  for (Index i = 0; i < n1 - 1; ++i) {
    for (Index j = 0; j < n2 - 1; ++j) increments(i, j) = scale * static_cast<Scalar>(rng.nextUniform());
  }

  RandomAntiMongeResult<Scalar> out;
  out.variation = increments.sum();
  out.isotonicCore = Matrix<Scalar>::Zero(n1, n2);
  for (Index i = 1; i < n1; ++i) {
    for (Index j = 1; j < n2; ++j) {
      out.isotonicCore(i, j) = out.isotonicCore(i - 1, j) + out.isotonicCore(i, j - 1) -
                               out.isotonicCore(i - 1, j - 1) + increments(i - 1, j - 1);
    }
  }

  Vector<Scalar> rowShift(n1), colShift(n2);
  for (Index i = 0; i < n1; ++i) rowShift(i) = scale * static_cast<Scalar>(2 * rng.nextUniform() - 1);
  for (Index j = 0; j < n2; ++j) colShift(j) = scale * static_cast<Scalar>(2 * rng.nextUniform() - 1);
  out.matrix = out.isotonicCore;
  out.matrix.colwise() += rowShift;
  out.matrix.rowwise() += colShift.transpose();
  return out;
}

inline Permutation randomPermutation(Index n, SeededRng& rng) {
  std::vector<Index> m(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) m[static_cast<size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng.nextBounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(m[static_cast<size_t>(i)], m[static_cast<size_t>(j)]);
  }
  return Permutation(std::move(m));
}

template <typename Scalar>
struct ShuffleResult {
  Matrix<Scalar> shuffled;  ///< applyPermutations(m, rows, cols)
  Permutation rows;
  Permutation cols;
};

/// Uniformly random row/column relabeling (Fisher-Yates on both axes).
template <typename Derived>
ShuffleResult<typename Derived::Scalar> randomShuffle(const Eigen::MatrixBase<Derived>& m, SeededRng& rng) {
  ShuffleResult<typename Derived::Scalar> out{Matrix<typename Derived::Scalar>(),
                                              randomPermutation(m.rows(), rng),
                                              randomPermutation(m.cols(), rng)};
  out.shuffled = applyPermutations(m, out.rows, out.cols);
  return out;
}

}  // namespace monge
