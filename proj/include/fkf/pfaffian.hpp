#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fkf/error.hpp"

namespace fkf {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Even-order antisymmetric matrix. Construction checks the shape and the symmetry.
template <class Scalar>
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(DenseMatrix<Scalar> m, double tol = 1e-14) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("skew matrix must be square");
    if (m_.rows() % 2) throw InvalidArgument("pfaffian needs an even order");
    for (Eigen::Index j = 0; j < m_.rows(); ++j)
      for (Eigen::Index k = j; k < m_.cols(); ++k)
        if (std::abs(m_(j, k) + m_(k, j)) > tol) throw InvalidArgument("matrix is not antisymmetric");
  }

  Eigen::Index order() const { return m_.rows(); }
  const DenseMatrix<Scalar>& matrix() const { return m_; }
  Scalar operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }

 private:
  DenseMatrix<Scalar> m_;
};

namespace detail {

template <class Derived>
typename Derived::Scalar pfaffian_rows(const Eigen::MatrixBase<Derived>& a, std::vector<Eigen::Index>& idx) {
  using Scalar = typename Derived::Scalar;
  if (idx.empty()) return Scalar(1);
  const Eigen::Index last = idx.back();
  idx.pop_back();
  Scalar sum(0);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const Eigen::Index row = idx[j];
    const Scalar entry = a(row, last);
    if (entry == Scalar(0)) continue;
    idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(j));
    const Scalar minor = pfaffian_rows(a, idx);
    idx.insert(idx.begin() + static_cast<std::ptrdiff_t>(j), row);
    sum += (j % 2 == 0 ? entry : -entry) * minor;
  }
  idx.push_back(last);
  return sum;
}

}  // namespace detail

// Expansion along the last column: pf(A) = sum_j (-1)^{j+1} A(j, 2n) pf(A without j, 2n).
template <class Scalar>
Scalar pfaffian(const SkewMatrix<Scalar>& a) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(a.order()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  return detail::pfaffian_rows(a.matrix(), idx);
}

template <class Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& a) {
  return pfaffian(SkewMatrix<typename Derived::Scalar>(a));
}

}  // namespace fkf
