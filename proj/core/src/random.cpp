#include "infent/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace infent {

Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

LinearOperator random_unitary(std::size_t d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    if (mag > 0.0) q.col(i) *= rii / mag;
  }
  return LinearOperator::unitary(std::move(q));
}

LinearOperator random_hermitian(std::size_t d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  return LinearOperator(0.5 * (g + g.adjoint()));
}

LinearOperator random_hermitian_contraction(std::size_t d, Rng& rng) {
  const LinearOperator h = random_hermitian(d, rng);
  const double norm = operator_norm(h);
  return LinearOperator((1.0 / norm) * h.matrix());
}

Vector random_unit_vector(std::size_t d, Rng& rng) {
  Vector v = random_ginibre(d, 1, rng).col(0);
  v.normalize();
  return v;
}

LinearOperator random_density(std::size_t d, Rng& rng) {
  const Matrix g = random_ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint());
  return LinearOperator(std::move(rho));
}

LinearOperator random_product_pure(std::size_t da, std::size_t db, Rng& rng) {
  const Vector a = random_unit_vector(da, rng);
  const Vector b = random_unit_vector(db, rng);
  Vector ab(static_cast<Eigen::Index>(da * db));
  for (Eigen::Index i = 0; i < a.size(); ++i) ab.segment(i * b.size(), b.size()) = a(i) * b;
  return LinearOperator::projector(ab, Dims{da, db});
}

LinearOperator random_separable(std::size_t da, std::size_t db, std::size_t terms, Rng& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    const double w = u01(rng) + 1e-3;
    acc += w * random_product_pure(da, db, rng).matrix();
    total += w;
  }
  acc /= total;
  return LinearOperator(0.5 * (acc + acc.adjoint()), Dims{da, db});
}

}  // namespace infent
