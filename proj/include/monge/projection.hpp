#pragma once

#include "monge/diff_ops.hpp"
#include "monge/geometry.hpp"
#include "monge/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace monge {

/// Settings for Dykstra projection onto the anti-Monge cone.
struct DykstraConfig {
  double feasTol = 1e-8;    ///< allowed negativity of the second differences
  double driftTol = 1e-10;  ///< Frobenius distance between successive sweeps
  long maxSweeps = 100000;
  std::optional<double> vMax;  ///< optional variation cap V0 (projects onto M intersect {V <= V0})

  void validate() const {
    if (feasTol < 0 || driftTol < 0) throw std::invalid_argument("DykstraConfig: tolerances must be nonnegative");
    if (maxSweeps < 1) throw std::invalid_argument("DykstraConfig: maxSweeps must be at least 1");
    if (vMax && *vMax < 0) throw std::invalid_argument("DykstraConfig: vMax must be nonnegative");
  }
};

template <typename Scalar>
struct ProjectionResult {
  Matrix<Scalar> estimate;
  long sweepsUsed = 0;
  Scalar finalFeasibilityGap = 0;  ///< max(0, -min second difference), plus cap violation if capped
  Scalar finalDrift = 0;
  bool converged = false;
};

/// Euclidean projection of the 2x2 block [[a,b],[c,d]] onto {a+d-b-c >= 0}:
/// with g = max(-(a+d-b-c), 0)/4 the corners move to (a+g, b-g, c-g, d+g).
template <typename Scalar>
std::array<Scalar, 4> projectBlock2x2(Scalar a, Scalar b, Scalar c, Scalar d) {
  const Scalar g = std::max(-(a + d - b - c), Scalar(0)) / Scalar(4);
  return {a + g, b - g, c - g, d + g};
}

namespace detail {

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
Scalar feasibilityGap(const RowMajorMatrix<Scalar>& theta, const std::optional<double>& vMax) {
  const Index n1 = theta.rows();
  const Index n2 = theta.cols();
  Scalar worst = 0;
  for (Index i = 0; i + 1 < n1; ++i) {
    const Scalar* top = theta.data() + i * n2;
    const Scalar* bot = top + n2;
    for (Index j = 0; j + 1 < n2; ++j) {
      const Scalar s = top[j] + bot[j + 1] - top[j + 1] - bot[j];
      worst = std::min(worst, s);
    }
  }
  Scalar gap = -worst;
  if (vMax) {
    const Scalar corner =
        theta(0, 0) + theta(n1 - 1, n2 - 1) - theta(n1 - 1, 0) - theta(0, n2 - 1);
    gap = std::max(gap, corner - static_cast<Scalar>(*vMax));
  }
  return std::max(gap, Scalar(0));
}

}  // namespace detail

/// Dykstra's cyclic projection specialized to the anti-Monge cone, written as
/// an intersection of one halfspace per contiguous 2x2 block. Each block keeps
/// a scalar residual eta; a sweep visits blocks in fixed row-major order
/// (i1 outer, i2 inner) so runs are bit-reproducible, then, if a variation cap
/// is configured, projects onto the corner halfspace
/// {theta(0,0) + theta(n1-1,n2-1) - theta(n1-1,0) - theta(0,n2-1) <= vMax}
/// with its own residual. On the cone the corner expression equals V, so the
/// capped run projects onto M intersect {V <= V0}.
///
/// Convergence requires both the feasibility gap and the inter-sweep drift to
/// fall below their tolerances. Exhausting maxSweeps returns converged=false
/// rather than throwing so long experiment runs can log and continue.
template <typename Derived>
ProjectionResult<typename Derived::Scalar> projectAntiMonge(const Eigen::MatrixBase<Derived>& y,
                                                            const DykstraConfig& cfg = {}) {
  using Scalar = typename Derived::Scalar;
  cfg.validate();
  requireFinite(y, "projectAntiMonge");

  const Index n1 = y.rows();
  const Index n2 = y.cols();
  ProjectionResult<Scalar> result;
  if (n1 < 2 || n2 < 2) {
    // no 2x2 blocks: the cone is the whole space (a cap on the corner formula
    // is also vacuous, the corner expression collapses to 0)
    result.estimate = y;
    result.converged = true;
    return result;
  }

  detail::RowMajorMatrix<Scalar> theta = y;
  detail::RowMajorMatrix<Scalar> prev(n1, n2);
  detail::RowMajorMatrix<Scalar> eta(n1 - 1, n2 - 1);
  eta.setZero();
  Scalar etaCap = 0;

  for (long sweep = 1; sweep <= cfg.maxSweeps; ++sweep) {
    prev = theta;
    for (Index i = 0; i + 1 < n1; ++i) {
      Scalar* top = theta.data() + i * n2;
      Scalar* bot = top + n2;
      Scalar* res = eta.data() + i * (n2 - 1);
      for (Index j = 0; j + 1 < n2; ++j) {
        const Scalar s = top[j] + bot[j + 1] - top[j + 1] - bot[j];
        const Scalar etaNew = std::max(res[j] - s / Scalar(4), Scalar(0));
        const Scalar d = etaNew - res[j];
        if (d != Scalar(0)) {
          top[j] += d;
          bot[j + 1] += d;
          top[j + 1] -= d;
          bot[j] -= d;
        }
        res[j] = etaNew;
      }
    }
    if (cfg.vMax) {
      // same Dykstra step for the halfspace {corner <= vMax}: the corner
      // stencil has squared norm 4 as well
      const Scalar corner =
          theta(0, 0) + theta(n1 - 1, n2 - 1) - theta(n1 - 1, 0) - theta(0, n2 - 1);
      const Scalar etaNew =
          std::max((corner - static_cast<Scalar>(*cfg.vMax)) / Scalar(4) + etaCap, Scalar(0));
      const Scalar d = etaCap - etaNew;
      if (d != Scalar(0)) {
        theta(0, 0) += d;
        theta(n1 - 1, n2 - 1) += d;
        theta(n1 - 1, 0) -= d;
        theta(0, n2 - 1) -= d;
      }
      etaCap = etaNew;
    }

    result.sweepsUsed = sweep;
    result.finalDrift = (theta - prev).norm();
    result.finalFeasibilityGap = detail::feasibilityGap(theta, cfg.vMax);
    if (result.finalFeasibilityGap <= cfg.feasTol && result.finalDrift <= cfg.driftTol) {
      result.converged = true;
      break;
    }
  }

  result.estimate = theta;
  return result;
}

/// Exact projection onto the same polyhedron by active-set enumeration, for
/// tiny instances only: solves the equality-constrained KKT system for every
/// subset of constraints and returns the unique candidate that is primal
/// feasible with nonnegative multipliers. Independent of the Dykstra path.
template <typename Scalar>
Matrix<Scalar> qpProjectionOracle(const Matrix<Scalar>& y, std::optional<Scalar> vMax = {}) {
  requireFinite(y, "qpProjectionOracle");
  const Index n1 = y.rows();
  const Index n2 = y.cols();
  if (n1 < 2 || n2 < 2) return y;

  // Constraints a_k . theta >= b_k over vectorized theta (column-major).
  struct Stencil {
    std::array<Index, 4> idx;
    std::array<Scalar, 4> coef;
    Scalar rhs;
  };
  const auto flat = [n1](Index i, Index j) { return j * n1 + i; };
  std::vector<Stencil> cons;
  for (Index i = 0; i + 1 < n1; ++i) {
    for (Index j = 0; j + 1 < n2; ++j) {
      cons.push_back({{flat(i, j), flat(i + 1, j + 1), flat(i, j + 1), flat(i + 1, j)},
                      {1, 1, -1, -1},
                      Scalar(0)});
    }
  }
  if (vMax) {
    // corner <= vMax written as -corner >= -vMax
    cons.push_back({{flat(0, 0), flat(n1 - 1, n2 - 1), flat(n1 - 1, 0), flat(0, n2 - 1)},
                    {-1, -1, 1, 1},
                    -*vMax});
  }
  const int m = static_cast<int>(cons.size());
  if (m > 12) throw std::invalid_argument("qpProjectionOracle: more than 12 constraints");

  const auto dot = [&](const Stencil& s, const Matrix<Scalar>& mat) {
    const Scalar* p = mat.data();
    Scalar acc = 0;
    for (int t = 0; t < 4; ++t) acc += s.coef[static_cast<size_t>(t)] * p[s.idx[static_cast<size_t>(t)]];
    return acc;
  };

  const Scalar tol = Scalar(1e-8) * std::max<Scalar>(Scalar(1), y.template lpNorm<Eigen::Infinity>());
  bool found = false;
  Scalar bestViolation = std::numeric_limits<Scalar>::infinity();
  Matrix<Scalar> best;

  std::vector<int> active;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    active.clear();
    for (int k = 0; k < m; ++k) {
      if (mask & (1u << k)) active.push_back(k);
    }
    const int na = static_cast<int>(active.size());
    Matrix<Scalar> theta = y;
    Vector<Scalar> lambda;
    if (na > 0) {
      // (A_S A_S^T) lambda = b_S - A_S y, then theta = y + A_S^T lambda
      Matrix<Scalar> gram(na, na);
      Vector<Scalar> rhs(na);
      for (int p = 0; p < na; ++p) {
        const Stencil& sp = cons[static_cast<size_t>(active[static_cast<size_t>(p)])];
        rhs(p) = sp.rhs - dot(sp, y);
        for (int q = 0; q < na; ++q) {
          const Stencil& sq = cons[static_cast<size_t>(active[static_cast<size_t>(q)])];
          Scalar g = 0;
          for (int t = 0; t < 4; ++t) {
            for (int u = 0; u < 4; ++u) {
              if (sp.idx[static_cast<size_t>(t)] == sq.idx[static_cast<size_t>(u)]) {
                g += sp.coef[static_cast<size_t>(t)] * sq.coef[static_cast<size_t>(u)];
              }
            }
          }
          gram(p, q) = g;
        }
      }
      Eigen::FullPivLU<Matrix<Scalar>> lu(gram);
      if (!lu.isInvertible()) continue;  // degenerate active set; covered by another subset
      lambda = lu.solve(rhs);
      for (int p = 0; p < na; ++p) {
        const Stencil& sp = cons[static_cast<size_t>(active[static_cast<size_t>(p)])];
        for (int t = 0; t < 4; ++t) {
          theta.data()[sp.idx[static_cast<size_t>(t)]] += lambda(p) * sp.coef[static_cast<size_t>(t)];
        }
      }
    }

    // KKT check: dual feasibility and primal feasibility
    Scalar violation = 0;
    for (int p = 0; p < na; ++p) violation = std::max(violation, -lambda(p));
    for (int k = 0; k < m; ++k) violation = std::max(violation, cons[static_cast<size_t>(k)].rhs - dot(cons[static_cast<size_t>(k)], theta));
    if (violation <= tol && violation < bestViolation) {
      bestViolation = violation;
      best = theta;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("qpProjectionOracle: no KKT point found (unexpected)");
  return best;
}

}  // namespace monge
