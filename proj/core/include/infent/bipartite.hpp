#pragma once

// Schmidt analysis of bipartite pure states, entanglement entropy, the
// maximally entangled reference state and the PPT fidelity bound.

#include <cstddef>
#include <vector>

#include "infent/operator.hpp"

namespace infent {

/// Psi = sum_ij coeff(i, j) e_i (x) f_j, normalized in Frobenius norm.
class BipartitePureState {
 public:
  /// Throws PreconditionError unless ||coeff||_F = 1 within 1e-12.
  explicit BipartitePureState(Matrix coeff);
  static BipartitePureState normalized(Matrix coeff);
  /// Row-major vector on C^da (x) C^db.
  static BipartitePureState from_vector(const Vector& v, std::size_t da, std::size_t db);

  [[nodiscard]] const Matrix& coefficients() const { return coeff_; }
  [[nodiscard]] std::size_t dim_a() const { return static_cast<std::size_t>(coeff_.rows()); }
  [[nodiscard]] std::size_t dim_b() const { return static_cast<std::size_t>(coeff_.cols()); }
  [[nodiscard]] Vector vector() const;
  [[nodiscard]] LinearOperator density() const;

 private:
  Matrix coeff_;
};

/// Schmidt coefficients in descending order with their bases. `left` and
/// `right` hold the vectors e'_n, e''_n as columns; both are empty for
/// families given directly in the computational basis.
struct SchmidtData {
  std::vector<double> coefficients;
  Matrix left;
  Matrix right;
};

SchmidtData schmidt(const BipartitePureState& psi);

/// -sum c_n^2 log2 c_n^2, zero coefficients contribute 0.
double entropy(const SchmidtData& s);

/// First n Schmidt coefficients of the divergent-entropy family, with
/// weights c_k^2 proportional to 1 / ((k+2) log2(k+2)^2), renormalized at n.
SchmidtData divergent_family(std::size_t n);

/// Omega_d = d^{-1/2} sum_k |kk>.
BipartitePureState max_entangled(std::size_t d);
/// p_d = |Omega_d><Omega_d| on dims [d, d].
LinearOperator max_entangled_projector(std::size_t d);

/// tr(rho p_d) for a density operator on [d, d].
double fidelity(const LinearOperator& rho, std::size_t d);

struct PptReport {
  bool is_ppt = false;
  double fidelity = 0.0;
  bool bound_respected = false;
  double min_pt_eigenvalue = 0.0;
};

/// Checks the PPT fidelity ceiling tr(rho p_d) <= 1/d for PPT states.
PptReport ppt_fidelity_bound_check(const LinearOperator& rho);

/// F p_d + (1 - F) (1 - p_d) / (d^2 - 1): the isotropic state with singlet fraction F.
LinearOperator isotropic_state(std::size_t d, double singlet_fraction);

/// Fixed thresholds.
inline constexpr double kPptThreshold = -1e-10;

}  // namespace infent
