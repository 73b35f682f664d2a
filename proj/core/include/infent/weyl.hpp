#pragma once

// Discrete Weyl operators on Z_d x Z_d and the Weyl-sum fidelity.
//
//   w(n1, m1, n2, m2) |k, l> = zeta^{n1 (k - m1) + n2 (l - m2)} |k - m1, l - m2>
//
// with zeta = exp(2 pi i / d) and all labels reduced to [0, d).

#include <functional>

#include "infent/operator.hpp"

namespace infent {

struct WeylIndex {
  int n1 = 0;
  int m1 = 0;
  int n2 = 0;
  int m2 = 0;
  int d = 2;

  /// Reduces every label into [0, d); d >= 2.
  static WeylIndex make(int n1, int m1, int n2, int m2, int d);
  [[nodiscard]] Complex zeta() const;
  /// Componentwise sum mod d.
  [[nodiscard]] WeylIndex operator+(const WeylIndex& o) const;
  bool operator==(const WeylIndex&) const = default;
};

/// exp(2 pi i k / d), with k reduced mod d first so the table is exact at k = 0.
Complex root_of_unity(long long k, int d);

/// Single-mode w(n, m) |k> = zeta^{n (k - m)} |k - m>.
LinearOperator weyl_single(int n, int m, int d);
/// u = w(1, 0) (clock), v = w(0, 1) (shift |k> -> |k - 1>); v u = zeta u v.
LinearOperator clock(int d);
LinearOperator shift(int d);

LinearOperator weyl_op(const WeylIndex& idx);

/// Exponent e with w(a) w(b) = zeta^e w(a + b).
int weyl_composition_exponent(const WeylIndex& a, const WeylIndex& b);

/// (1/d^2) sum_{n,m} w(n, m, -n, m).
LinearOperator max_ent_projector_weyl(int d);
/// (1/d^2) sum over the listed m values only (all n); a partial sum for guard tests.
LinearOperator partial_weyl_sum(int d, const std::vector<int>& ms);

/// omega((U1 U2^{-1})^n (V1 V2)^m).
using WordExpectation = std::function<Complex(int n, int m)>;

/// (1/d^2) sum_{n,m < d} eval(n, m), summed in row order n-major.
Complex weyl_fidelity(int d, const WordExpectation& eval);

/// Dense evaluation; U1, V1 act on Alice and U2, V2 on Bob, rho on [dA, dB].
Complex weyl_fidelity(const LinearOperator& rho, const LinearOperator& u1, const LinearOperator& v1,
                      const LinearOperator& u2, const LinearOperator& v2, int d);

/// max of ||V U - zeta U V||_max, ||U^d - 1||_max, ||V^d - 1||_max.
double weyl_relation_residual(const LinearOperator& u, const LinearOperator& v, int d);

}  // namespace infent
