#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monge {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

template <typename Derived>
void requireFinite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix contains NaN or Inf entries");
  }
}

/// A bijection of {0, ..., n-1} stored as an index array.
///
/// `p(i)` is the source index that position `i` reads from, so applying `p`
/// to the rows of a matrix places row `p(i)` at position `i` (see
/// applyPermutations below).
class Permutation {
 public:
  explicit Permutation(std::vector<Index> map) : map_(std::move(map)) {
    std::vector<char> seen(map_.size(), 0);
    for (Index v : map_) {
      if (v < 0 || v >= static_cast<Index>(map_.size()) || seen[static_cast<size_t>(v)]) {
        throw std::invalid_argument("Permutation: index map is not a bijection");
      }
      seen[static_cast<size_t>(v)] = 1;
    }
  }

  static Permutation identity(Index n) {
    std::vector<Index> m(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) m[static_cast<size_t>(i)] = i;
    return Permutation(std::move(m));
  }

  /// The order-reversing permutation i -> n-1-i.
  static Permutation reversal(Index n) {
    std::vector<Index> m(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) m[static_cast<size_t>(i)] = n - 1 - i;
    return Permutation(std::move(m));
  }

  Index size() const { return static_cast<Index>(map_.size()); }
  Index operator()(Index i) const { return map_[static_cast<size_t>(i)]; }
  const std::vector<Index>& indices() const { return map_; }

  Permutation inverse() const {
    std::vector<Index> inv(map_.size());
    for (size_t i = 0; i < map_.size(); ++i) inv[static_cast<size_t>(map_[i])] = static_cast<Index>(i);
    return Permutation(std::move(inv));
  }

  bool isIdentity() const {
    for (size_t i = 0; i < map_.size(); ++i) {
      if (map_[i] != static_cast<Index>(i)) return false;
    }
    return true;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.map_ == b.map_; }

 private:
  std::vector<Index> map_;
};

/// Function composition: (outer . inner)(i) = outer(inner(i)).
inline Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.size() != inner.size()) {
    throw std::invalid_argument("compose: permutation sizes differ");
  }
  std::vector<Index> m(static_cast<size_t>(inner.size()));
  for (Index i = 0; i < inner.size(); ++i) m[static_cast<size_t>(i)] = outer(inner(i));
  return Permutation(std::move(m));
}

/// out(i, j) = m(p1(i), p2(j)).
template <typename Derived>
Matrix<typename Derived::Scalar> applyPermutations(const Eigen::MatrixBase<Derived>& m,
                                                   const Permutation& p1, const Permutation& p2) {
  if (p1.size() != m.rows() || p2.size() != m.cols()) {
    throw std::invalid_argument("applyPermutations: permutation sizes do not match matrix shape");
  }
  Matrix<typename Derived::Scalar> out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = m(p1(i), p2(j));
  }
  return out;
}

}  // namespace monge
