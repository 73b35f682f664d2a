#pragma once

// The infinite chain of qubit pairs with the singlet reference state.
//
// Observables and states are sparse maps from pair index to a 4x4 block on
// that pair (Alice qubit (x) Bob qubit). Every pair not listed carries the
// identity (observables) or the singlet (states), so the infinite system is
// only ever touched through finite supports.

#include <map>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "infent/operator.hpp"

namespace infent {

using PairIndex = boost::multiprecision::cpp_int;

/// (|01> - |10>)/sqrt(2)
Vector singlet_vector();
LinearOperator singlet_density();

/// Finitely supported product observable.
class ChainObservable {
 public:
  ChainObservable() = default;
  static ChainObservable local(const PairIndex& k, const LinearOperator& block);

  /// Multiplies `block` into pair k from the right.
  [[nodiscard]] ChainObservable with(const PairIndex& k, const LinearOperator& block) const;
  [[nodiscard]] const std::map<PairIndex, LinearOperator>& support() const { return support_; }
  [[nodiscard]] bool is_identity() const { return support_.empty(); }

  /// Blockwise product; the result is again a product observable.
  friend ChainObservable operator*(const ChainObservable& a, const ChainObservable& b);

  [[nodiscard]] std::string to_json() const;
  static ChainObservable from_json(const std::string& text);

 private:
  std::map<PairIndex, LinearOperator> support_;
};

/// Product state: singlet on every pair except a finite set of overrides.
class ChainState {
 public:
  ChainState() = default;

  /// Throws PreconditionError unless rho is a density on [2, 2].
  [[nodiscard]] ChainState with_override(const PairIndex& k, const LinearOperator& rho) const;
  [[nodiscard]] const std::map<PairIndex, LinearOperator>& overrides() const { return overrides_; }
  [[nodiscard]] bool is_default() const { return overrides_.empty(); }

  [[nodiscard]] std::string to_json() const;
  static ChainState from_json(const std::string& text);

 private:
  std::map<PairIndex, LinearOperator> overrides_;
};

/// Product over the union of supports of the per-pair expectations.
Complex expect(const ChainState& s, const ChainObservable& a);

/// Exact density on pair k.
LinearOperator restrict(const ChainState& s, const PairIndex& k);

/// Even pairs (2j) and odd pairs (2j+1) as two chains indexed by j.
struct ChainSplit {
  ChainState even;
  ChainState odd;
};

/// Only the default chain can be split; throws UnsupportedError otherwise.
ChainSplit split_even_odd(const ChainState& s);

/// Parent-chain index of pair j of the even (parity 0) or odd (parity 1) half.
PairIndex half_to_parent(const PairIndex& j, int parity);

/// Moves an observable of one half onto the parent chain.
ChainObservable lift_from_half(const ChainObservable& a, int parity);

/// Phi_M = tensor product of the singlet on pairs 0..M-1, pair 0 most
/// significant. M <= 8.
Vector window_vector(std::size_t m);

/// <Phi_M, A Phi_M> computed by applying each block to the dense window vector.
/// Requires every support index to be below M.
Complex window_expect(const ChainObservable& a, std::size_t m);

/// Commutant of Alice's window algebra inside all operators on M pairs.
struct CommutantReport {
  std::size_t dimension = 0;          ///< dimension of the commutant
  std::size_t bob_dimension = 0;      ///< 4^M
  bool equals_bob_algebra = false;
};

/// Pauli-string method, M <= 3.
CommutantReport window_commutant_pauli(std::size_t m);
/// Dense null-space solve of [X_a, C] = [Z_a, C] = 0, M <= 2.
CommutantReport window_commutant_dense(std::size_t m);

}  // namespace infent
