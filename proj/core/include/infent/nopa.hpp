#pragma once

// The two-mode squeezed vacuum
//   Psi_lambda = sqrt(1 - lambda^2) sum_n lambda^n |n, n>,  lambda = tanh r,
// in truncated Fock space: qudit extraction, permutation isometries,
// oscillator doubles, and the Gaussian moments approaching the EPR state.
//
// Quadratures: Q = (a + a^dagger)/sqrt2, P = -i (a - a^dagger)/sqrt2, vacuum variance 1/2.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infent/bipartite.hpp"
#include "infent/operator.hpp"

namespace infent {

struct NopaParams {
  double lambda = 0.0;
  double r = 0.0;
  std::size_t trunc = 2;

  /// lambda in [0, 1), trunc >= 2.
  static NopaParams from_lambda(double lambda, std::size_t trunc);
  /// r >= 0.
  static NopaParams from_r(double r, std::size_t trunc);

  /// lambda^{2N}: weight of the levels n >= N in the untruncated state.
  [[nodiscard]] double tail_weight() const;
  /// Throws TruncationError when the tail weight exceeds `tolerance`.
  void require_tail(double tolerance, const char* where) const;
};

/// Renormalized diagonal coefficients c_n, n < N.
std::vector<double> nopa_coefficients(const NopaParams& p);

/// Coefficients over |n1, n2>, n_i < N.
class FockVector {
 public:
  explicit FockVector(Matrix coeff);
  [[nodiscard]] const Matrix& coefficients() const { return coeff_; }
  [[nodiscard]] std::size_t trunc() const { return static_cast<std::size_t>(coeff_.rows()); }
  [[nodiscard]] double norm() const { return coeff_.norm(); }
  [[nodiscard]] FockVector normalized() const;
  [[nodiscard]] BipartitePureState as_bipartite() const;

 private:
  Matrix coeff_;
};

FockVector nopa_state(const NopaParams& p);

/// -log2(1 - l^2) - l^2/(1 - l^2) log2(l^2).
double nopa_entropy_closed_form(double lambda);
/// Entropy of the truncated, renormalized state.
double nopa_entropy(const NopaParams& p);
/// tr(rho_1^2) of the truncated state; (1 - l^2)/(1 + l^2) untruncated.
double nopa_reduced_purity(const NopaParams& p);

struct Extraction {
  FockVector coarse;            ///< Psi_{lambda^d} on N/d levels
  NopaParams coarse_params;
  BipartitePureState qudit;     ///< proportional to sum_{r<d} lambda^r e_r (x) e_r
  double residual = 0.0;        ///< ||(U_d (x) U_d) Psi - coarse (x) qudit||
  double fidelity = 0.0;        ///< <Omega_d| qudit state |Omega_d>
};

/// U_d e_{dk+r} = e_k (x) e_r on both modes. Requires d >= 2 and d | N.
Extraction extract_qudit(const NopaParams& p, std::size_t d);

/// (1/d) ((1 - l^d)/(1 - l))^2 (1 - l^2)/(1 - l^{2d}).
double extraction_fidelity_closed_form(double lambda, std::size_t d);

/// V_p e_n = e_{p(n)} for an injective p.
class PermIsometry {
 public:
  using Map = std::function<std::uint64_t(std::uint64_t)>;
  PermIsometry(std::string name, Map p, std::optional<std::uint64_t> ell);

  static PermIsometry identity();
  static PermIsometry shift(std::uint64_t ell);
  static PermIsometry even();
  static PermIsometry odd();
  /// 2k <-> 2k+1.
  static PermIsometry local_swaps();

  [[nodiscard]] std::uint64_t operator()(std::uint64_t n) const { return p_(n); }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] std::optional<std::uint64_t> ell() const { return ell_; }

  /// Injectivity and the distance bound on 0..N-1; throws PreconditionError.
  void validate(std::size_t n) const;

  /// Compression to span{e_0..e_{N-1}}: entries (p(n), n) with p(n) < N.
  [[nodiscard]] Matrix matrix(std::size_t n) const;

 private:
  std::string name_;
  Map p_;
  std::optional<std::uint64_t> ell_;
};

struct IsometryGap {
  std::size_t domain = 0;      ///< #{n < N : p(n) < N}
  double isometry_residual = 0.0;  ///< ||V^dagger V - 1_domain||_max
  double range_trace = 0.0;    ///< tr(V V^dagger)
  double deficit = 0.0;        ///< N - tr(V V^dagger)
};

IsometryGap isometry_gap(const PermIsometry& v, std::size_t n);

/// ||(V_p (x) 1 - 1 (x) V_p^dagger) Psi_lambda||^2 = sum_n (c_n - c_{p(n)})^2 with
/// the untruncated coefficients, cut at n < N; refuses when the tail
/// lambda^{2N} exceeds `tolerance`.
double perm_defect(const NopaParams& p, const PermIsometry& v, double tolerance = 1e-12);

/// (1 - l^ell)^2, the exact shift defect.
double shift_defect_closed_form(double lambda, std::uint64_t ell);
/// |1 - l^{-ell}|^2.
double perm_defect_bound(double lambda, std::uint64_t ell);
/// (1 - l^2) [1/(1 - l^2) - 2/(1 - l^3) + 1/(1 - l^4)], tends to 1/6.
double even_defect_closed_form(double lambda);
/// (1 - l^2) [1/(1 - l^2) - 2 l/(1 - l^3) + l^2/(1 - l^4)].
double odd_defect_closed_form(double lambda);
/// 2 (1 - l)^2 / (1 + l^2).
double swap_defect_closed_form(double lambda);

/// Bounded function of the oscillator level n (f(H) e_n = f(n) e_n).
using LevelFunction = std::function<Complex(std::uint64_t)>;

/// ||(f(H_1) - f(H_2)) Psi||.
double hamiltonian_double_check(const NopaParams& p, const LevelFunction& f);
double hamiltonian_double_check(const FockVector& psi, const LevelFunction& f);

struct EprVariances {
  double var_qdiff = 0.0;
  double var_psum = 0.0;
  double var_qsum = 0.0;
  double var_pdiff = 0.0;
};

/// Closed forms: e^{-2r} for Q1-Q2 and P1+P2, e^{2r} for Q1+Q2 and P1-P2.
EprVariances epr_covariance(double r);

struct SecondMoments {
  double var_q1 = 0.0;
  double var_p1 = 0.0;
  double cov_q = 0.0;  ///< Cov(Q1, Q2)
  double cov_p = 0.0;  ///< Cov(P1, P2)
  EprVariances combos;
};

/// Moments of the truncated state by direct summation over its coefficients;
/// refuses (TruncationError) when lambda^{2N} exceeds `tolerance`.
SecondMoments fock_second_moments(const NopaParams& p, double tolerance = 1e-8);

/// <W(xi, eta)> with W = exp(i sum_k (xi_k P_k - eta_k Q_k)), mode 2 displaced by a in position:
/// exp(-1/2 [xi^T S_P xi + eta^T S_Q eta]) exp(-i eta_2 a).
Complex characteristic_fn(double r, double xi1, double xi2, double eta1, double eta2, double a = 0.0);

/// The same expectation from the truncated Fock state; each single-mode
/// factor is exponentiated on N + pad levels.
Complex characteristic_fn_fock(const NopaParams& p, double xi1, double xi2, double eta1, double eta2,
                               std::size_t pad = 32);

}  // namespace infent
