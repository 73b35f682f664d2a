#include "infent/operator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace infent {

namespace {

std::atomic<std::size_t> g_max_entries{std::size_t{1} << 20};

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

void check_size(Eigen::Index rows, Eigen::Index cols) {
  const auto entries = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (entries > g_max_entries.load(std::memory_order_relaxed)) {
    throw SizeError("operator with " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " entries exceeds the configured maximum of " +
                    std::to_string(g_max_entries.load()) + " entries");
  }
}

void require_two_factors(const LinearOperator& x, std::size_t which, const char* op) {
  if (!x.is_square()) throw PreconditionError(std::string(op) + ": operator is not square");
  if (x.dims().size() != 2) {
    throw PreconditionError(std::string(op) + ": operator must carry exactly two tensor factors");
  }
  if (which > 1) throw ArgumentError(std::string(op) + ": factor index out of range");
}

bool less_complex(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::size_t max_entries() { return g_max_entries.load(std::memory_order_relaxed); }

void set_max_entries(std::size_t n) {
  if (n == 0) throw ArgumentError("set_max_entries: cap must be positive");
  g_max_entries.store(n, std::memory_order_relaxed);
}

LinearOperator::LinearOperator(Matrix m) : LinearOperator(std::move(m), Dims{}) {}

LinearOperator::LinearOperator(Matrix m, Dims dims) : m_(std::move(m)), dims_(std::move(dims)) {
  if (m_.rows() == 0 || m_.cols() == 0) throw ArgumentError("LinearOperator: empty matrix");
  check_size(m_.rows(), m_.cols());
  if (dims_.empty()) dims_ = {static_cast<std::size_t>(m_.rows())};
  if (std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; })) {
    throw ArgumentError("LinearOperator: zero tensor-factor dimension");
  }
  if (product(dims_) != static_cast<std::size_t>(m_.rows())) {
    throw ArgumentError("LinearOperator: product of dims does not match rows");
  }
}

LinearOperator LinearOperator::identity(std::size_t n) { return identity(Dims{n}); }

LinearOperator LinearOperator::identity(const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  check_size(n, n);
  return LinearOperator(Matrix::Identity(n, n), dims);
}

LinearOperator LinearOperator::zero(const Dims& dims) {
  const auto n = static_cast<Eigen::Index>(product(dims));
  check_size(n, n);
  return LinearOperator(Matrix::Zero(n, n), dims);
}

LinearOperator LinearOperator::hermitian(Matrix m, Dims dims) {
  LinearOperator op(std::move(m), std::move(dims));
  if (!op.is_hermitian()) throw PreconditionError("LinearOperator::hermitian: matrix is not Hermitian");
  return op;
}

LinearOperator LinearOperator::unitary(Matrix m, Dims dims) {
  LinearOperator op(std::move(m), std::move(dims));
  if (!op.is_unitary()) throw PreconditionError("LinearOperator::unitary: matrix is not unitary");
  return op;
}

LinearOperator LinearOperator::projector(const Vector& v, Dims dims) {
  return LinearOperator(v * v.adjoint(), std::move(dims));
}

LinearOperator LinearOperator::adjoint() const {
  if (!is_square()) return LinearOperator(m_.adjoint());
  return LinearOperator(m_.adjoint(), dims_);
}

LinearOperator LinearOperator::transpose() const {
  if (!is_square()) return LinearOperator(m_.transpose());
  return LinearOperator(m_.transpose(), dims_);
}

LinearOperator LinearOperator::conjugate() const { return LinearOperator(m_.conjugate(), dims_); }

Complex LinearOperator::trace() const { return m_.trace(); }

LinearOperator LinearOperator::with_dims(Dims dims) const { return LinearOperator(m_, std::move(dims)); }

bool LinearOperator::is_hermitian(double tol) const {
  return is_square() && max_abs_entry(m_ - m_.adjoint()) <= tol;
}

bool LinearOperator::is_unitary(double tol) const {
  if (!is_square()) return false;
  const Matrix id = Matrix::Identity(m_.rows(), m_.cols());
  return max_abs_entry(m_.adjoint() * m_ - id) <= tol;
}

bool LinearOperator::is_normal(double tol) const {
  if (!is_square()) return false;
  const double scale = std::max(1.0, m_.squaredNorm());
  return (m_ * m_.adjoint() - m_.adjoint() * m_).norm() <= tol * scale;
}

Vector LinearOperator::apply(const Vector& v) const {
  if (v.size() != m_.cols()) throw ArgumentError("LinearOperator::apply: dimension mismatch");
  return m_ * v;
}

Complex LinearOperator::expectation(const Vector& v) const { return v.dot(apply(v)); }

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  if (a.m_.rows() != b.m_.rows() || a.m_.cols() != b.m_.cols()) {
    throw ArgumentError("operator+: shape mismatch");
  }
  return LinearOperator(a.m_ + b.m_, a.dims_);
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  if (a.m_.rows() != b.m_.rows() || a.m_.cols() != b.m_.cols()) {
    throw ArgumentError("operator-: shape mismatch");
  }
  return LinearOperator(a.m_ - b.m_, a.dims_);
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  if (a.m_.cols() != b.m_.rows()) throw ArgumentError("operator*: inner dimension mismatch");
  Matrix prod = a.m_ * b.m_;
  if (prod.rows() == prod.cols()) return LinearOperator(std::move(prod), a.dims_);
  return LinearOperator(std::move(prod));
}

LinearOperator operator*(Complex s, const LinearOperator& a) { return LinearOperator(s * a.m_, a.dims_); }

Matrix Spectrum::reconstruct() const {
  Eigen::VectorXcd lambda(static_cast<Eigen::Index>(eigenvalues.size()));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) lambda(static_cast<Eigen::Index>(i)) = eigenvalues[i];
  return eigenvectors * lambda.asDiagonal() * eigenvectors.adjoint();
}

std::vector<double> Spectrum::real_eigenvalues() const {
  std::vector<double> out(eigenvalues.size());
  std::transform(eigenvalues.begin(), eigenvalues.end(), out.begin(), [](Complex z) { return z.real(); });
  return out;
}

Spectrum spectrum(const LinearOperator& x) {
  if (!x.is_square()) throw PreconditionError("spectrum: operator is not square");
  const Matrix& m = x.matrix();
  const auto n = m.rows();
  Spectrum out;

  if (x.is_hermitian()) {
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw PreconditionError("spectrum: eigensolver failed");
    out.eigenvalues.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    out.eigenvectors = es.eigenvectors();
    return out;  // already ascending
  }

  if (!x.is_normal()) throw PreconditionError("spectrum: operator is not normal");
  Eigen::ComplexSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success) throw PreconditionError("spectrum: Schur decomposition failed");
  const Matrix& t = schur.matrixT();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return less_complex(t(a, a), t(b, b)); });
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.eigenvalues[static_cast<std::size_t>(i)] = t(src, src);
    out.eigenvectors.col(i) = schur.matrixU().col(src);
  }
  return out;
}

LinearOperator tensor(const LinearOperator& a, const LinearOperator& b) {
  const auto ar = a.matrix().rows(), ac = a.matrix().cols();
  const auto br = b.matrix().rows(), bc = b.matrix().cols();
  check_size(ar * br, ac * bc);
  Matrix k(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      k.block(i * br, j * bc, br, bc) = a.matrix()(i, j) * b.matrix();
    }
  }
  if (!a.is_square() || !b.is_square()) return LinearOperator(std::move(k));
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return LinearOperator(std::move(k), std::move(dims));
}

LinearOperator tensor(std::initializer_list<LinearOperator> factors) {
  if (factors.size() == 0) throw ArgumentError("tensor: no factors");
  auto it = factors.begin();
  LinearOperator acc = *it++;
  for (; it != factors.end(); ++it) acc = tensor(acc, *it);
  return acc;
}

LinearOperator partial_trace(const LinearOperator& x, std::size_t which) {
  require_two_factors(x, which, "partial_trace");
  const auto da = static_cast<Eigen::Index>(x.dims()[0]);
  const auto db = static_cast<Eigen::Index>(x.dims()[1]);
  const Matrix& m = x.matrix();
  if (which == kBob) {
    Matrix out = Matrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
    return LinearOperator(std::move(out));
  }
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index j = 0; j < db; ++j)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
  return LinearOperator(std::move(out));
}

LinearOperator partial_transpose(const LinearOperator& x, std::size_t which) {
  require_two_factors(x, which, "partial_transpose");
  const auto da = static_cast<Eigen::Index>(x.dims()[0]);
  const auto db = static_cast<Eigen::Index>(x.dims()[1]);
  const Matrix& m = x.matrix();
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k)
        for (Eigen::Index l = 0; l < db; ++l) {
          const Complex v = (which == kBob) ? m(i * db + l, k * db + j) : m(k * db + j, i * db + l);
          out(i * db + j, k * db + l) = v;
        }
  return LinearOperator(std::move(out), x.dims());
}

LinearOperator spectral_fn(const LinearOperator& x, const std::function<Complex(Complex)>& f) {
  const Spectrum s = spectrum(x);
  Eigen::VectorXcd fl(static_cast<Eigen::Index>(s.eigenvalues.size()));
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) fl(static_cast<Eigen::Index>(i)) = f(s.eigenvalues[i]);
  return LinearOperator(s.eigenvectors * fl.asDiagonal() * s.eigenvectors.adjoint(), x.dims());
}

LinearOperator flip(std::size_t d1, std::size_t d2) {
  const auto a = static_cast<Eigen::Index>(d1), b = static_cast<Eigen::Index>(d2);
  Matrix f = Matrix::Zero(a * b, a * b);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < b; ++j) f(j * a + i, i * b + j) = 1.0;
  if (d1 == d2) return LinearOperator(std::move(f), Dims{d1, d2});
  return LinearOperator(std::move(f));
}

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b) { return a * b - b * a; }

double operator_norm(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double operator_norm(const LinearOperator& x) { return operator_norm(x.matrix()); }

double max_abs_entry(const Matrix& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

double min_eigenvalue(const LinearOperator& hermitian) {
  if (!hermitian.is_hermitian(tol::kSpectral)) throw PreconditionError("min_eigenvalue: operator is not Hermitian");
  const Matrix sym = 0.5 * (hermitian.matrix() + hermitian.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_density(const LinearOperator& rho, double tol) {
  if (!rho.is_square() || !rho.is_hermitian(tol)) return false;
  if (std::abs(rho.trace() - Complex{1.0}) > tol) return false;
  return min_eigenvalue(rho) >= -tol;
}

void require_density(const LinearOperator& rho, const char* where) {
  if (!is_density(rho)) throw PreconditionError(std::string(where) + ": input is not a density operator");
}

double von_neumann_entropy(const LinearOperator& rho) {
  const Matrix sym = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

Complex branch_cut_root(Complex z, int d) {
  if (d < 1) throw ArgumentError("branch_cut_root: order must be positive");
  double theta = std::atan2(z.imag(), z.real());
  if (theta <= -std::numbers::pi) theta = std::numbers::pi;
  return std::polar(std::pow(std::abs(z), 1.0 / d), theta / d);
}

LinearOperator spectral_sign(const LinearOperator& hermitian) {
  return spectral_fn(hermitian, [](Complex z) { return Complex{z.real() >= 0.0 ? 1.0 : -1.0}; });
}

LinearOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return LinearOperator(m);
}

LinearOperator pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return LinearOperator(m);
}

LinearOperator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return LinearOperator(m);
}

}  // namespace infent
