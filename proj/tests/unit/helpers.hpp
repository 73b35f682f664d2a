#pragma once

#include <doctest.h>

#include "infent/operator.hpp"

namespace infent::test {

inline double diff(const Matrix& a, const Matrix& b) { return max_abs_entry(a - b); }
inline double diff(const LinearOperator& a, const LinearOperator& b) { return max_abs_entry(a.matrix() - b.matrix()); }

inline LinearOperator basis_projector(std::size_t dim, std::size_t k, Dims dims = {}) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return LinearOperator::projector(v, std::move(dims));
}

inline Matrix diag(std::initializer_list<Complex> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (Complex c : entries) v(i++) = c;
  return v.asDiagonal();
}

}  // namespace infent::test
