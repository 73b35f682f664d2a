#include "infent/nopa.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace infent {

namespace {

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Untruncated coefficient sqrt(1 - l^2) l^n.
double raw_coefficient(double lambda, std::uint64_t n) {
  return std::sqrt(1.0 - lambda * lambda) * std::pow(lambda, static_cast<double>(n));
}

void require_fock_size(std::size_t n, const char* where) {
  if (n * n > max_entries()) throw SizeError(std::string(where) + ": N^2 exceeds the configured entry cap");
}

}  // namespace

NopaParams NopaParams::from_lambda(double lambda, std::size_t trunc) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) throw ArgumentError("NopaParams: lambda must lie in [0, 1)");
  if (trunc < 2) throw ArgumentError("NopaParams: truncation must be at least 2");
  return NopaParams{lambda, std::atanh(lambda), trunc};
}

NopaParams NopaParams::from_r(double r, std::size_t trunc) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ArgumentError("NopaParams: r must be finite and nonnegative");
  if (trunc < 2) throw ArgumentError("NopaParams: truncation must be at least 2");
  const double lambda = std::tanh(r);
  if (!(lambda < 1.0)) throw ArgumentError("NopaParams: tanh(r) rounds to 1");
  return NopaParams{lambda, r, trunc};
}

double NopaParams::tail_weight() const { return std::pow(lambda, 2.0 * static_cast<double>(trunc)); }

void NopaParams::require_tail(double tolerance, const char* where) const {
  const double tail = tail_weight();
  if (tail > tolerance) {
    throw TruncationError(std::string(where) + ": truncation tail lambda^(2N) = " + fmt_double(tail) +
                          " exceeds the requested tolerance " + fmt_double(tolerance));
  }
}

std::vector<double> nopa_coefficients(const NopaParams& p) {
  std::vector<double> c(p.trunc);
  double sum = 0.0;
  for (std::size_t n = 0; n < p.trunc; ++n) {
    c[n] = std::pow(p.lambda, static_cast<double>(n));
    sum += c[n] * c[n];
  }
  const double norm = std::sqrt(sum);
  for (double& x : c) x /= norm;
  return c;
}

FockVector::FockVector(Matrix coeff) : coeff_(std::move(coeff)) {
  if (coeff_.rows() != coeff_.cols() || coeff_.rows() < 1) throw ArgumentError("FockVector: coefficients must be N x N");
}

FockVector FockVector::normalized() const {
  const double n = coeff_.norm();
  if (n == 0.0) throw ArgumentError("FockVector: zero vector");
  return FockVector(coeff_ / n);
}

BipartitePureState FockVector::as_bipartite() const { return BipartitePureState::normalized(coeff_); }

FockVector nopa_state(const NopaParams& p) {
  require_fock_size(p.trunc, "nopa_state");
  const auto c = nopa_coefficients(p);
  const auto n = static_cast<Eigen::Index>(p.trunc);
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = c[static_cast<std::size_t>(i)];
  return FockVector(std::move(m));
}

double nopa_entropy_closed_form(double lambda) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) throw ArgumentError("nopa_entropy_closed_form: lambda must lie in [0, 1)");
  if (lambda == 0.0) return 0.0;
  const double l2 = lambda * lambda;
  return -std::log2(1.0 - l2) - l2 / (1.0 - l2) * std::log2(l2);
}

double nopa_entropy(const NopaParams& p) {
  SchmidtData s;
  s.coefficients = nopa_coefficients(p);
  return entropy(s);
}

double nopa_reduced_purity(const NopaParams& p) {
  double acc = 0.0;
  for (double c : nopa_coefficients(p)) acc += c * c * c * c;
  return acc;
}

Extraction extract_qudit(const NopaParams& p, std::size_t d) {
  if (d < 2) throw ArgumentError("extract_qudit: d must be at least 2");
  if (p.trunc % d != 0) throw ArgumentError("extract_qudit: truncation must be a multiple of d");
  const std::size_t coarse_n = p.trunc / d;
  if (coarse_n < 2) throw ArgumentError("extract_qudit: truncation must be at least 2d");
  const NopaParams cp = NopaParams::from_lambda(std::pow(p.lambda, static_cast<double>(d)), coarse_n);

  const FockVector psi = nopa_state(p);
  FockVector coarse = nopa_state(cp);

  const auto dd = static_cast<Eigen::Index>(d);
  Matrix q = Matrix::Zero(dd, dd);
  for (Eigen::Index r = 0; r < dd; ++r) q(r, r) = std::pow(p.lambda, static_cast<double>(r));
  BipartitePureState qudit = BipartitePureState::normalized(q);

  // (U_d (x) U_d) Psi has coefficient C(d k1 + r1, d k2 + r2) at (k1, k2; r1, r2).
  const Matrix& c = psi.coefficients();
  const Matrix& a = coarse.coefficients();
  const Matrix& b = qudit.coefficients();
  double res2 = 0.0;
  const auto cn = static_cast<Eigen::Index>(coarse_n);
  for (Eigen::Index k1 = 0; k1 < cn; ++k1)
    for (Eigen::Index k2 = 0; k2 < cn; ++k2)
      for (Eigen::Index r1 = 0; r1 < dd; ++r1)
        for (Eigen::Index r2 = 0; r2 < dd; ++r2) {
          const Complex diff = c(dd * k1 + r1, dd * k2 + r2) - a(k1, k2) * b(r1, r2);
          res2 += std::norm(diff);
        }

  const double fid = fidelity(qudit.density(), d);
  return Extraction{std::move(coarse), cp, std::move(qudit), std::sqrt(res2), fid};
}

double extraction_fidelity_closed_form(double lambda, std::size_t d) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) throw ArgumentError("extraction_fidelity_closed_form: lambda must lie in [0, 1)");
  if (d < 2) throw ArgumentError("extraction_fidelity_closed_form: d must be at least 2");
  const double dd = static_cast<double>(d);
  const double g = (1.0 - std::pow(lambda, dd)) / (1.0 - lambda);
  return g * g * (1.0 - lambda * lambda) / (1.0 - std::pow(lambda, 2.0 * dd)) / dd;
}

PermIsometry::PermIsometry(std::string name, Map p, std::optional<std::uint64_t> ell)
    : name_(std::move(name)), p_(std::move(p)), ell_(ell) {
  if (!p_) throw ArgumentError("PermIsometry: empty map");
}

PermIsometry PermIsometry::identity() {
  return PermIsometry("identity", [](std::uint64_t n) { return n; }, 0);
}

PermIsometry PermIsometry::shift(std::uint64_t ell) {
  return PermIsometry("shift", [ell](std::uint64_t n) { return n + ell; }, ell);
}

PermIsometry PermIsometry::even() {
  return PermIsometry("even", [](std::uint64_t n) { return 2 * n; }, std::nullopt);
}

PermIsometry PermIsometry::odd() {
  return PermIsometry("odd", [](std::uint64_t n) { return 2 * n + 1; }, std::nullopt);
}

PermIsometry PermIsometry::local_swaps() {
  return PermIsometry("local_swaps", [](std::uint64_t n) { return n ^ 1u; }, 1);
}

void PermIsometry::validate(std::size_t n) const {
  std::unordered_map<std::uint64_t, std::uint64_t> seen;
  seen.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t img = p_(k);
    if (!seen.emplace(img, k).second) throw PreconditionError("PermIsometry " + name_ + ": map is not injective");
    if (ell_) {
      const std::uint64_t dist = img > k ? img - k : k - img;
      if (dist > *ell_) throw PreconditionError("PermIsometry " + name_ + ": distance bound violated");
    }
  }
}

Matrix PermIsometry::matrix(std::size_t n) const {
  require_fock_size(n, "PermIsometry::matrix");
  validate(n);
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix v = Matrix::Zero(nn, nn);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t img = p_(k);
    if (img < n) v(static_cast<Eigen::Index>(img), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return v;
}

IsometryGap isometry_gap(const PermIsometry& v, std::size_t n) {
  const Matrix m = v.matrix(n);
  IsometryGap gap;
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix expected = Matrix::Zero(nn, nn);
  for (Eigen::Index k = 0; k < nn; ++k) {
    if (v(static_cast<std::uint64_t>(k)) < n) {
      expected(k, k) = 1.0;
      ++gap.domain;
    }
  }
  gap.isometry_residual = max_abs_entry(m.adjoint() * m - expected);
  gap.range_trace = (m * m.adjoint()).trace().real();
  gap.deficit = static_cast<double>(n) - gap.range_trace;
  return gap;
}

double perm_defect(const NopaParams& p, const PermIsometry& v, double tolerance) {
  p.require_tail(tolerance, "perm_defect");
  const std::uint64_t n = p.trunc;
  v.validate(n);

  // For injective p the components of (V (x) 1 - 1 (x) V^dagger) Psi sit at
  // |p(n), n> with amplitude c_n - c_{p(n)}; the sum is cut at n < N.
  double acc = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double x = raw_coefficient(p.lambda, k) - raw_coefficient(p.lambda, v(k));
    acc += x * x;
  }
  return acc;
}

double shift_defect_closed_form(double lambda, std::uint64_t ell) {
  const double x = 1.0 - std::pow(lambda, static_cast<double>(ell));
  return x * x;
}

double perm_defect_bound(double lambda, std::uint64_t ell) {
  if (!(lambda > 0.0)) throw ArgumentError("perm_defect_bound: lambda must be positive");
  const double x = 1.0 - std::pow(lambda, -static_cast<double>(ell));
  return x * x;
}

double even_defect_closed_form(double lambda) {
  const double l2 = lambda * lambda;
  return (1.0 - l2) * (1.0 / (1.0 - l2) - 2.0 / (1.0 - l2 * lambda) + 1.0 / (1.0 - l2 * l2));
}

double odd_defect_closed_form(double lambda) {
  const double l2 = lambda * lambda;
  return (1.0 - l2) * (1.0 / (1.0 - l2) - 2.0 * lambda / (1.0 - l2 * lambda) + l2 / (1.0 - l2 * l2));
}

double swap_defect_closed_form(double lambda) {
  const double x = 1.0 - lambda;
  return 2.0 * x * x / (1.0 + lambda * lambda);
}

double hamiltonian_double_check(const NopaParams& p, const LevelFunction& f) {
  // Psi is diagonal, so (f(H1) - f(H2)) Psi = sum_n c_n (f(n) - f(n)) |n, n>.
  const auto c = nopa_coefficients(p);
  double acc = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    const Complex f1 = f(n);
    const Complex f2 = f(n);
    if (!std::isfinite(f1.real()) || !std::isfinite(f1.imag())) {
      throw PreconditionError("hamiltonian_double_check: f is not bounded on the truncated levels");
    }
    acc += std::norm((f1 - f2) * c[n]);
  }
  return std::sqrt(acc);
}

double hamiltonian_double_check(const FockVector& psi, const LevelFunction& f) {
  const Matrix& c = psi.coefficients();
  std::vector<Complex> fv(static_cast<std::size_t>(c.rows()));
  for (std::size_t n = 0; n < fv.size(); ++n) {
    fv[n] = f(n);
    if (!std::isfinite(fv[n].real()) || !std::isfinite(fv[n].imag())) {
      throw PreconditionError("hamiltonian_double_check: f is not bounded on the truncated levels");
    }
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      acc += std::norm((fv[static_cast<std::size_t>(i)] - fv[static_cast<std::size_t>(j)]) * c(i, j));
  return std::sqrt(acc);
}

EprVariances epr_covariance(double r) {
  if (!(r >= 0.0)) throw ArgumentError("epr_covariance: r must be nonnegative");
  const double lo = std::exp(-2.0 * r);
  const double hi = std::exp(2.0 * r);
  return EprVariances{lo, lo, hi, hi};
}

SecondMoments fock_second_moments(const NopaParams& p, double tolerance) {
  p.require_tail(tolerance, "fock_second_moments");
  const auto c = nopa_coefficients(p);
  // <a1^dag a1> = sum n c_n^2,  <a1 a2> = sum (n + 1) c_n c_{n+1}; all other
  // quadratic moments vanish on a diagonal state.
  double mean_n = 0.0;
  double pair = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    mean_n += static_cast<double>(n) * c[n] * c[n];
    if (n + 1 < c.size()) pair += static_cast<double>(n + 1) * c[n] * c[n + 1];
  }
  SecondMoments m;
  m.var_q1 = mean_n + 0.5;
  m.var_p1 = mean_n + 0.5;
  m.cov_q = pair;
  m.cov_p = -pair;
  m.combos.var_qdiff = 2.0 * m.var_q1 - 2.0 * m.cov_q;
  m.combos.var_psum = 2.0 * m.var_p1 + 2.0 * m.cov_p;
  m.combos.var_qsum = 2.0 * m.var_q1 + 2.0 * m.cov_q;
  m.combos.var_pdiff = 2.0 * m.var_p1 - 2.0 * m.cov_p;
  return m;
}

Complex characteristic_fn(double r, double xi1, double xi2, double eta1, double eta2, double a) {
  if (!(r >= 0.0)) throw ArgumentError("characteristic_fn: r must be nonnegative");
  const double c = 0.5 * std::cosh(2.0 * r);
  const double s = 0.5 * std::sinh(2.0 * r);
  // S_Q = [[c, s], [s, c]], S_P = [[c, -s], [-s, c]]
  const double qp = c * (xi1 * xi1 + xi2 * xi2) - 2.0 * s * xi1 * xi2;
  const double qq = c * (eta1 * eta1 + eta2 * eta2) + 2.0 * s * eta1 * eta2;
  return std::exp(-0.5 * (qp + qq)) * std::polar(1.0, -eta2 * a);
}

Complex characteristic_fn_fock(const NopaParams& p, double xi1, double xi2, double eta1, double eta2, std::size_t pad) {
  const std::size_t m = p.trunc + pad;
  require_fock_size(m, "characteristic_fn_fock");
  const auto mm = static_cast<Eigen::Index>(m);
  Matrix ann = Matrix::Zero(mm, mm);
  for (Eigen::Index k = 1; k < mm; ++k) ann(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix q = (ann + ann.adjoint()) / std::sqrt(2.0);
  const Matrix pm = Complex(0.0, -1.0) * (ann - ann.adjoint()) / std::sqrt(2.0);

  auto single = [&](double xi, double eta) {
    const LinearOperator g = LinearOperator::hermitian(0.5 * ((xi * pm - eta * q) + (xi * pm - eta * q).adjoint()));
    return spectral_fn(g, [](Complex x) { return std::exp(Complex(0.0, 1.0) * x); }).matrix();
  };
  const Matrix w1 = single(xi1, eta1);
  const Matrix w2 = single(xi2, eta2);

  const auto c = nopa_coefficients(p);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      acc += c[i] * c[j] * w1(ii, jj) * w2(ii, jj);
    }
  return acc;
}

}  // namespace infent
