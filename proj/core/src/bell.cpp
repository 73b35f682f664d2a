#include "infent/bell.hpp"

#include <cmath>
#include <future>
#include <string>

namespace infent {

namespace {

void require_contraction(const LinearOperator& x, const char* name) {
  if (!x.is_square() || !x.is_hermitian()) {
    throw PreconditionError(std::string("ChshWitness: ") + name + " is not Hermitian");
  }
  const auto ev = spectrum(x).real_eigenvalues();
  if (ev.front() < -1.0 - tol::kSpectral || ev.back() > 1.0 + tol::kSpectral) {
    throw PreconditionError(std::string("ChshWitness: ") + name + " is not a contraction");
  }
}

LinearOperator hermitian_part(const Matrix& m) { return LinearOperator(0.5 * (m + m.adjoint())); }

// Tr_B(rho (1 (x) X)) and Tr_A(rho (X (x) 1)).
LinearOperator alice_kernel(const LinearOperator& rho, const LinearOperator& x, std::size_t da) {
  const LinearOperator full = rho * tensor(LinearOperator::identity(da), x).with_dims(rho.dims());
  return hermitian_part(partial_trace(full, kBob).matrix());
}

LinearOperator bob_kernel(const LinearOperator& rho, const LinearOperator& x, std::size_t db) {
  const LinearOperator full = rho * tensor(x, LinearOperator::identity(db)).with_dims(rho.dims());
  return hermitian_part(partial_trace(full, kAlice).matrix());
}

void require_compatible(const LinearOperator& rho, const ChshWitness& w) {
  if (rho.dims().size() != 2 || rho.dims()[0] != w.dim_a() || rho.dims()[1] != w.dim_b()) {
    throw ArgumentError("beta_eval: state and witness dimensions disagree");
  }
}

Matrix embed_block(const LinearOperator& x, std::size_t d) {
  if (d < x.rows()) throw ArgumentError("embed_witness: target factor is smaller than the witness");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.topLeftCorner(x.matrix().rows(), x.matrix().cols()) = x.matrix();
  return m;
}

}  // namespace

void ChshWitness::validate() const {
  require_contraction(a1, "A1");
  require_contraction(a2, "A2");
  require_contraction(b1, "B1");
  require_contraction(b2, "B2");
  if (a1.rows() != a2.rows() || b1.rows() != b2.rows()) {
    throw PreconditionError("ChshWitness: observables on the same side must share a dimension");
  }
}

ChshWitness tsirelson_witness() {
  const double s = 1.0 / std::sqrt(2.0);
  ChshWitness w;
  w.a1 = pauli_x();
  w.a2 = pauli_z();
  w.b1 = LinearOperator::hermitian(-s * (pauli_x().matrix() + pauli_z().matrix()));
  w.b2 = LinearOperator::hermitian(s * (pauli_z().matrix() - pauli_x().matrix()));
  w.beta = kTsirelson;
  return w;
}

ChshWitness embed_witness(const ChshWitness& w, std::size_t da, std::size_t db) {
  ChshWitness out;
  out.a1 = LinearOperator::hermitian(embed_block(w.a1, da));
  out.a2 = LinearOperator::hermitian(embed_block(w.a2, da));
  out.b1 = LinearOperator::hermitian(embed_block(w.b1, db));
  out.b2 = LinearOperator::hermitian(embed_block(w.b2, db));
  out.beta = 0.0;
  return out;
}

ChshWitness random_witness(std::size_t da, std::size_t db, Rng& rng) {
  ChshWitness w;
  w.a1 = random_hermitian_contraction(da, rng);
  w.a2 = random_hermitian_contraction(da, rng);
  w.b1 = random_hermitian_contraction(db, rng);
  w.b2 = random_hermitian_contraction(db, rng);
  w.beta = 0.0;
  return w;
}

LinearOperator chsh_operator(const ChshWitness& w) {
  const Dims dims{w.dim_a(), w.dim_b()};
  return (tensor(w.a1, w.b1 + w.b2) + tensor(w.a2, w.b1 - w.b2)).with_dims(dims);
}

double chsh_expectation(const LinearOperator& rho, const ChshWitness& w) {
  w.validate();
  require_compatible(rho, w);
  return (rho.matrix() * chsh_operator(w).matrix()).trace().real();
}

double beta_eval(const LinearOperator& rho, const ChshWitness& w) { return 0.5 * chsh_expectation(rho, w); }

SeesawRun beta_optimize_run(const LinearOperator& rho, const ChshWitness& init, std::size_t max_iters, double tol) {
  require_density(rho, "beta_optimize");
  init.validate();
  require_compatible(rho, init);
  const std::size_t da = init.dim_a();
  const std::size_t db = init.dim_b();

  SeesawRun run;
  run.witness = init;
  run.witness.beta = beta_eval(rho, init);
  run.half_steps.push_back(run.witness.beta);

  ChshWitness& w = run.witness;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const double before = w.beta;
    w.a1 = spectral_sign(alice_kernel(rho, w.b1 + w.b2, da));
    w.a2 = spectral_sign(alice_kernel(rho, w.b1 - w.b2, da));
    run.half_steps.push_back(beta_eval(rho, w));
    w.b1 = spectral_sign(bob_kernel(rho, w.a1 + w.a2, db));
    w.b2 = spectral_sign(bob_kernel(rho, w.a1 - w.a2, db));
    w.beta = beta_eval(rho, w);
    run.half_steps.push_back(w.beta);
    run.iterations = it + 1;
    if (w.beta - before < tol) {
      run.converged = true;
      break;
    }
  }
  return run;
}

ChshWitness beta_optimize(const LinearOperator& rho, const ChshWitness& init, std::size_t max_iters, double tol) {
  return beta_optimize_run(rho, init, max_iters, tol).witness;
}

RestartResult beta_optimize_restarts(const LinearOperator& rho, const RestartOptions& opt) {
  require_density(rho, "beta_optimize_restarts");
  if (rho.dims().size() != 2) throw ArgumentError("beta_optimize_restarts: state must be bipartite");
  const std::size_t da = rho.dims()[0];
  const std::size_t db = rho.dims()[1];
  if (da < 2 || db < 2) throw ArgumentError("beta_optimize_restarts: both factors need dimension >= 2");

  auto start = [&](std::size_t index) {
    if (index == 0) return embed_witness(tsirelson_witness(), da, db);
    Rng rng(opt.seed + (index - 1));
    return random_witness(da, db, rng);
  };
  auto job = [&](std::size_t index) { return beta_optimize(rho, start(index), opt.max_iters, opt.tol); };

  const std::size_t total = opt.restarts + 1;
  std::vector<ChshWitness> results(total);
  const std::size_t threads = opt.threads == 0 ? 1 : opt.threads;
  for (std::size_t base = 0; base < total; base += threads) {
    std::vector<std::future<ChshWitness>> batch;
    for (std::size_t i = base; i < std::min(total, base + threads); ++i) {
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, job, i));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) results[base + i] = batch[i].get();
  }

  RestartResult out;
  out.best = results[0];
  for (std::size_t i = 0; i < total; ++i) {
    out.betas.push_back(results[i].beta);
    if (results[i].beta > out.best.beta) {
      out.best = results[i];
      out.best_index = i;
    }
  }
  return out;
}

ChainObservable test_operator_sequence(const PairIndex& m, const PairIndex& k, const ChshWitness& w) {
  if (k < 0 || k > m) throw ArgumentError("test_operator_sequence: pair index must satisfy 0 <= k <= M");
  if (w.dim_a() != 2 || w.dim_b() != 2) throw ArgumentError("test_operator_sequence: witness must act on qubits");
  w.validate();
  return ChainObservable::local(k, chsh_operator(w));
}

}  // namespace infent
