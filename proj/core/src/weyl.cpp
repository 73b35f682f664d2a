#include "infent/weyl.hpp"

#include <cmath>
#include <numbers>

#include "infent/modular.hpp"

namespace infent {

namespace {

int mod(long long a, int d) {
  const long long r = a % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

void require_d(int d, const char* where) {
  if (d < 2) throw ArgumentError(std::string(where) + ": d must be at least 2");
}

Matrix matrix_power(const Matrix& m, int k) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

}  // namespace

WeylIndex WeylIndex::make(int n1, int m1, int n2, int m2, int d) {
  require_d(d, "WeylIndex");
  return WeylIndex{mod(n1, d), mod(m1, d), mod(n2, d), mod(m2, d), d};
}

Complex WeylIndex::zeta() const { return root_of_unity(1, d); }

WeylIndex WeylIndex::operator+(const WeylIndex& o) const {
  if (o.d != d) throw ArgumentError("WeylIndex: dimension mismatch");
  return make(n1 + o.n1, m1 + o.m1, n2 + o.n2, m2 + o.m2, d);
}

Complex root_of_unity(long long k, int d) {
  require_d(d, "root_of_unity");
  const int r = mod(k, d);
  if (r == 0) return 1.0;
  return std::polar(1.0, 2.0 * std::numbers::pi * r / d);
}

LinearOperator weyl_single(int n, int m, int d) {
  require_d(d, "weyl_single");
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix w = Matrix::Zero(dd, dd);
  for (int k = 0; k < d; ++k) {
    const int target = mod(k - m, d);
    w(target, k) = root_of_unity(static_cast<long long>(n) * (k - m), d);
  }
  return LinearOperator::unitary(std::move(w));
}

LinearOperator clock(int d) { return weyl_single(1, 0, d); }
LinearOperator shift(int d) { return weyl_single(0, 1, d); }

LinearOperator weyl_op(const WeylIndex& idx) {
  const auto d = static_cast<std::size_t>(idx.d);
  return tensor(weyl_single(idx.n1, idx.m1, idx.d), weyl_single(idx.n2, idx.m2, idx.d)).with_dims(Dims{d, d});
}

int weyl_composition_exponent(const WeylIndex& a, const WeylIndex& b) {
  if (a.d != b.d) throw ArgumentError("weyl_composition_exponent: dimension mismatch");
  return mod(static_cast<long long>(b.n1) * a.m1 + static_cast<long long>(b.n2) * a.m2, a.d);
}

LinearOperator max_ent_projector_weyl(int d) {
  require_d(d, "max_ent_projector_weyl");
  std::vector<int> all(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) all[static_cast<std::size_t>(m)] = m;
  return partial_weyl_sum(d, all);
}

LinearOperator partial_weyl_sum(int d, const std::vector<int>& ms) {
  require_d(d, "partial_weyl_sum");
  const auto n2 = static_cast<Eigen::Index>(d * d);
  Matrix acc = Matrix::Zero(n2, n2);
  for (int n = 0; n < d; ++n)
    for (int m : ms) acc += weyl_op(WeylIndex::make(n, m, -n, m, d)).matrix();
  acc /= static_cast<double>(d * d);
  const auto du = static_cast<std::size_t>(d);
  return LinearOperator(std::move(acc), Dims{du, du});
}

Complex weyl_fidelity(int d, const WordExpectation& eval) {
  require_d(d, "weyl_fidelity");
  Complex acc = 0.0;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) acc += eval(n, m);
  return acc / static_cast<double>(d * d);
}

Complex weyl_fidelity(const LinearOperator& rho, const LinearOperator& u1, const LinearOperator& v1,
                      const LinearOperator& u2, const LinearOperator& v2, int d) {
  require_d(d, "weyl_fidelity");
  if (!u1.is_square() || u1.rows() != v1.rows() || !u2.is_square() || u2.rows() != v2.rows()) {
    throw ArgumentError("weyl_fidelity: Alice and Bob operators must be square and paired");
  }
  const std::size_t da = u1.rows();
  const std::size_t db = u2.rows();
  if (rho.rows() != da * db) throw ArgumentError("weyl_fidelity: state dimension does not match the operators");
  const Matrix uu = embed_alice(u1, db).matrix() * embed_bob(da, u2.adjoint()).matrix();
  const Matrix vv = embed_alice(v1, db).matrix() * embed_bob(da, v2).matrix();
  std::vector<Matrix> upow(static_cast<std::size_t>(d));
  std::vector<Matrix> vpow(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    upow[static_cast<std::size_t>(k)] = matrix_power(uu, k);
    vpow[static_cast<std::size_t>(k)] = matrix_power(vv, k);
  }
  return weyl_fidelity(d, [&](int n, int m) {
    return (rho.matrix() * upow[static_cast<std::size_t>(n)] * vpow[static_cast<std::size_t>(m)]).trace();
  });
}

double weyl_relation_residual(const LinearOperator& u, const LinearOperator& v, int d) {
  require_d(d, "weyl_relation_residual");
  if (u.rows() != v.rows() || !u.is_square() || !v.is_square()) {
    throw ArgumentError("weyl_relation_residual: operators must be square of equal size");
  }
  const Complex z = root_of_unity(1, d);
  const Matrix id = Matrix::Identity(u.matrix().rows(), u.matrix().cols());
  double r = max_abs_entry(v.matrix() * u.matrix() - z * u.matrix() * v.matrix());
  r = std::max(r, max_abs_entry(matrix_power(u.matrix(), d) - id));
  r = std::max(r, max_abs_entry(matrix_power(v.matrix(), d) - id));
  return r;
}

}  // namespace infent
