#pragma once

// Finite-dimensional Tomita-Takesaki data of a bipartite pure state with full
// Schmidt rank, modular flow, and the EPR-doubles calculus.
//
// For Psi = sum_a c_a e_a (x) f_a the modular operator is
//   Delta = rho_A (x) rho_B^{-1},
// and the modular conjugation acts in the Schmidt bases as
//   J (x (x) y) = conj(y) (x) conj(x).
// S = J Delta^{1/2} then maps (A (x) 1) Psi to (A^dagger (x) 1) Psi.

#include <optional>

#include "infent/bipartite.hpp"
#include "infent/operator.hpp"

namespace infent {

/// Anti-unitary K -> U K, acting on coordinates as v -> U conj(v).
class AntiUnitary {
 public:
  explicit AntiUnitary(LinearOperator unitary_part);

  [[nodiscard]] const LinearOperator& unitary_part() const { return u_; }
  [[nodiscard]] Vector apply(const Vector& v) const;
  /// J X J as a linear operator: U conj(X) conj(U).
  [[nodiscard]] LinearOperator conjugate_operator(const LinearOperator& x) const;

 private:
  LinearOperator u_;
};

struct ModularData {
  LinearOperator rho_a;
  LinearOperator rho_b;
  LinearOperator delta;
  AntiUnitary conj_j;
  Vector omega;

  /// S v = J Delta^{1/2} v.
  [[nodiscard]] Vector apply_s(const Vector& v) const;
  /// Delta^{z} through the functional calculus (real z).
  [[nodiscard]] LinearOperator delta_power(double z) const;
  /// Delta^{it}.
  [[nodiscard]] LinearOperator delta_it(double t) const;
  [[nodiscard]] std::size_t dim() const { return rho_a.rows(); }
};

/// Minimum Schmidt coefficient accepted as cyclic and separating.
inline constexpr double kMinSchmidtCoefficient = 1e-8;
/// Threshold on ||[A, rho_A]||_2 for centralizer membership.
inline constexpr double kCentralizerThreshold = 1e-9;

/// Throws PreconditionError("not cyclic") when the Schmidt rank is below d.
ModularData modular_data(const BipartitePureState& psi);

/// rho_A^{it} A rho_A^{-it}.
LinearOperator modular_flow(const ModularData& md, const LinearOperator& a, double t);

struct DoubleDefect {
  double forward = 0.0;   ///< omega((A - B)^dagger (A - B))
  double backward = 0.0;  ///< omega((A - B)(A - B)^dagger)
  [[nodiscard]] double max() const { return forward > backward ? forward : backward; }
};

/// A acts on the first factor, B on the second; omega is a density on [dA, dB].
DoubleDefect double_defect(const LinearOperator& rho, const LinearOperator& a, const LinearOperator& b);
/// Vector-state overload.
DoubleDefect double_defect(const Vector& psi, const LinearOperator& a, const LinearOperator& b);

/// Bob-side operator B with (1 (x) B) = J (A^dagger (x) 1) J, or nullopt when
/// A is not in the centralizer of the restricted state.
std::optional<LinearOperator> find_double(const ModularData& md, const LinearOperator& a);

/// J (X (x) 1) J reduced to the Bob factor, without the centralizer check.
LinearOperator mirror_to_bob(const ModularData& md, const LinearOperator& a);

/// Embeddings A (x) 1 and 1 (x) B.
LinearOperator embed_alice(const LinearOperator& a, std::size_t db);
LinearOperator embed_bob(std::size_t da, const LinearOperator& b);

}  // namespace infent
