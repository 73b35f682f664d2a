#pragma once

// CHSH correlations, the see-saw maximization over local observables, and
// the per-pair test operators of the singlet chain.

#include <cstdint>
#include <vector>

#include "infent/chain.hpp"
#include "infent/operator.hpp"
#include "infent/random.hpp"

namespace infent {

/// Hermitian contractions A1, A2 (Alice) and B1, B2 (Bob) with the value
/// they achieved on the last state they were optimized for.
struct ChshWitness {
  LinearOperator a1 = LinearOperator::identity(2);
  LinearOperator a2 = LinearOperator::identity(2);
  LinearOperator b1 = LinearOperator::identity(2);
  LinearOperator b2 = LinearOperator::identity(2);
  double beta = 0.0;

  /// Throws PreconditionError unless all four are Hermitian contractions.
  void validate() const;
  [[nodiscard]] std::size_t dim_a() const { return a1.rows(); }
  [[nodiscard]] std::size_t dim_b() const { return b1.rows(); }
};

inline constexpr double kTsirelson = 1.4142135623730951;

/// A1 = sx, A2 = sz, B1 = -(sx + sz)/sqrt2, B2 = (sz - sx)/sqrt2: optimal on the singlet.
ChshWitness tsirelson_witness();

/// Places a qubit witness in the top-left 2x2 blocks of larger factors (zero elsewhere).
ChshWitness embed_witness(const ChshWitness& w, std::size_t da, std::size_t db);

/// Random Hermitian contractions on both sides.
ChshWitness random_witness(std::size_t da, std::size_t db, Rng& rng);

/// T = A1 (x) (B1 + B2) + A2 (x) (B1 - B2) on dims [da, db].
LinearOperator chsh_operator(const ChshWitness& w);

/// omega(T), without the 1/2.
double chsh_expectation(const LinearOperator& rho, const ChshWitness& w);

/// beta = 1/2 omega(T).
double beta_eval(const LinearOperator& rho, const ChshWitness& w);

struct SeesawRun {
  ChshWitness witness;
  std::vector<double> half_steps;  ///< beta after every half-step, starting with the initial value
  std::size_t iterations = 0;
  bool converged = false;
};

/// Alternating spectral-sign updates until a full iteration improves beta by
/// less than `tol` or `max_iters` iterations have run.
SeesawRun beta_optimize_run(const LinearOperator& rho, const ChshWitness& init, std::size_t max_iters = 1000,
                            double tol = 1e-12);

ChshWitness beta_optimize(const LinearOperator& rho, const ChshWitness& init, std::size_t max_iters = 1000,
                          double tol = 1e-12);

struct RestartOptions {
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  std::size_t max_iters = 1000;
  double tol = 1e-12;
  std::size_t threads = 1;
};

struct RestartResult {
  ChshWitness best;
  std::size_t best_index = 0;   ///< 0 is the embedded Tsirelson start, i >= 1 the (i-1)-th random start
  std::vector<double> betas;    ///< final beta of every start, in index order
};

/// Runs the embedded Tsirelson start plus `restarts` random starts (restart i
/// seeded with seed + i) and keeps the largest beta, ties to the lower index.
RestartResult beta_optimize_restarts(const LinearOperator& rho, const RestartOptions& opt);

/// T_k on pair k of the chain, k <= M, from a qubit witness.
ChainObservable test_operator_sequence(const PairIndex& m, const PairIndex& k, const ChshWitness& w);

}  // namespace infent
