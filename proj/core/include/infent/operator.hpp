#pragma once

// Dense complex linear algebra on tensor-product spaces.
//
// A LinearOperator is an immutable dense matrix together with the list of
// tensor-factor dimensions of its row space. Everything else in the library
// (states, observables, modular data, Weyl operators) is expressed through it.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "infent/errors.hpp"

namespace infent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

namespace tol {
inline constexpr double kStructural = 1e-12;
inline constexpr double kSpectral = 1e-10;
inline constexpr double kUnitary = 1e-10;
}  // namespace tol

/// Factor labels for two-party operators.
inline constexpr std::size_t kAlice = 0;
inline constexpr std::size_t kBob = 1;

/// Upper bound on rows*cols of any LinearOperator (default 2^20).
std::size_t max_entries();
void set_max_entries(std::size_t n);

class LinearOperator {
 public:
  /// Square operators default to a single tensor factor.
  explicit LinearOperator(Matrix m);
  LinearOperator(Matrix m, Dims dims);

  static LinearOperator identity(std::size_t n);
  static LinearOperator identity(const Dims& dims);
  static LinearOperator zero(const Dims& dims);
  /// Constructs and asserts ||X - X^dagger||_max <= 1e-12.
  static LinearOperator hermitian(Matrix m, Dims dims = {});
  /// Constructs and asserts ||X^dagger X - 1||_max <= 1e-10.
  static LinearOperator unitary(Matrix m, Dims dims = {});
  /// |v><v| on the given factorization.
  static LinearOperator projector(const Vector& v, Dims dims = {});

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  [[nodiscard]] bool is_square() const { return m_.rows() == m_.cols(); }

  [[nodiscard]] LinearOperator adjoint() const;
  [[nodiscard]] LinearOperator transpose() const;
  [[nodiscard]] LinearOperator conjugate() const;
  [[nodiscard]] Complex trace() const;
  /// Same matrix, new factorization (product must match rows).
  [[nodiscard]] LinearOperator with_dims(Dims dims) const;

  [[nodiscard]] bool is_hermitian(double tol = tol::kStructural) const;
  [[nodiscard]] bool is_unitary(double tol = tol::kUnitary) const;
  [[nodiscard]] bool is_normal(double tol = tol::kSpectral) const;

  [[nodiscard]] Vector apply(const Vector& v) const;
  /// <v, X v>
  [[nodiscard]] Complex expectation(const Vector& v) const;

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(Complex s, const LinearOperator& a);
  friend LinearOperator operator*(const LinearOperator& a, Complex s) { return s * a; }
  friend LinearOperator operator-(const LinearOperator& a) { return Complex{-1.0} * a; }

 private:
  Matrix m_;
  Dims dims_;
};

/// Eigen-decomposition of a normal operator, eigenvalues sorted ascending by
/// (real part, imaginary part); eigenvectors are orthonormal columns.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] Matrix reconstruct() const;
  [[nodiscard]] std::vector<double> real_eigenvalues() const;
};

/// Throws PreconditionError unless ||X X^dagger - X^dagger X|| <= 1e-10.
Spectrum spectrum(const LinearOperator& x);

/// Kronecker product; dims concatenate.
LinearOperator tensor(const LinearOperator& a, const LinearOperator& b);
LinearOperator tensor(std::initializer_list<LinearOperator> factors);

/// Trace over the named factor (0 or 1) of a two-factor operator.
LinearOperator partial_trace(const LinearOperator& x, std::size_t which);

/// Transposition on the named factor (0 or 1) of a two-factor operator.
LinearOperator partial_transpose(const LinearOperator& x, std::size_t which);

/// f applied to the eigenvalues of a normal operator.
LinearOperator spectral_fn(const LinearOperator& x, const std::function<Complex(Complex)>& f);

/// Unitary exchanging the factors of C^d1 (x) C^d2.
LinearOperator flip(std::size_t d1, std::size_t d2);

/// [A, B] = AB - BA
LinearOperator commutator(const LinearOperator& a, const LinearOperator& b);

/// Largest singular value.
double operator_norm(const LinearOperator& x);
double operator_norm(const Matrix& x);
double max_abs_entry(const Matrix& x);

/// Smallest eigenvalue of a Hermitian operator.
double min_eigenvalue(const LinearOperator& hermitian);

/// Hermitian, PSD within `tol`, unit trace within `tol`.
bool is_density(const LinearOperator& rho, double tol = tol::kSpectral);
void require_density(const LinearOperator& rho, const char* where);

/// von Neumann entropy in bits of a density operator.
double von_neumann_entropy(const LinearOperator& rho);

/// Principal d-th root with the branch cut on the negative real axis:
/// arg z is taken in (-pi, pi].
Complex branch_cut_root(Complex z, int d);

/// Spectral sign with sign(0) = +1.
LinearOperator spectral_sign(const LinearOperator& hermitian);

/// Pauli matrices.
LinearOperator pauli_x();
LinearOperator pauli_y();
LinearOperator pauli_z();

}  // namespace infent
