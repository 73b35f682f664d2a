#include "infent/modular.hpp"

#include <cmath>

namespace infent {

AntiUnitary::AntiUnitary(LinearOperator unitary_part) : u_(std::move(unitary_part)) {
  if (!u_.is_unitary()) throw PreconditionError("AntiUnitary: unitary part is not unitary");
}

Vector AntiUnitary::apply(const Vector& v) const { return u_.apply(v.conjugate()); }

LinearOperator AntiUnitary::conjugate_operator(const LinearOperator& x) const {
  return LinearOperator(u_.matrix() * x.matrix().conjugate() * u_.matrix().conjugate(), x.dims());
}

Vector ModularData::apply_s(const Vector& v) const { return conj_j.apply(delta_power(0.5).apply(v)); }

LinearOperator ModularData::delta_power(double z) const {
  return spectral_fn(delta, [z](Complex l) { return Complex{std::pow(l.real(), z)}; });
}

LinearOperator ModularData::delta_it(double t) const {
  return spectral_fn(delta, [t](Complex l) { return std::polar(1.0, t * std::log(l.real())); });
}

LinearOperator embed_alice(const LinearOperator& a, std::size_t db) {
  return tensor(a, LinearOperator::identity(db));
}

LinearOperator embed_bob(std::size_t da, const LinearOperator& b) {
  return tensor(LinearOperator::identity(da), b);
}

ModularData modular_data(const BipartitePureState& psi) {
  if (psi.dim_a() != psi.dim_b()) throw ArgumentError("modular_data: factors must have equal dimension");
  const std::size_t d = psi.dim_a();
  const SchmidtData sd = schmidt(psi);
  if (sd.coefficients.size() != d || sd.coefficients.back() < kMinSchmidtCoefficient) {
    throw PreconditionError("modular_data: state is not cyclic (Schmidt rank below full)");
  }

  const LinearOperator rho = psi.density();
  LinearOperator rho_a = partial_trace(rho, kBob);
  LinearOperator rho_b = partial_trace(rho, kAlice);
  const LinearOperator rho_b_inv = spectral_fn(rho_b, [](Complex l) { return Complex{1.0 / l.real()}; });
  LinearOperator delta = tensor(rho_a, rho_b_inv);

  // J v = (G (x) G^T) F conj(v) with G = W_A W_B^T built from the Schmidt bases.
  const Matrix g = sd.left * sd.right.transpose();
  const LinearOperator gg = tensor(LinearOperator(g), LinearOperator(Matrix(g.transpose())));
  LinearOperator uj = gg * flip(d, d);

  return ModularData{std::move(rho_a), std::move(rho_b), std::move(delta),
                     AntiUnitary(uj.with_dims(Dims{d, d})), psi.vector()};
}

LinearOperator modular_flow(const ModularData& md, const LinearOperator& a, double t) {
  if (a.rows() != md.dim() || !a.is_square()) throw ArgumentError("modular_flow: operator must act on Alice's factor");
  const LinearOperator u = spectral_fn(md.rho_a, [t](Complex l) { return std::polar(1.0, t * std::log(l.real())); });
  return u * a * u.adjoint();
}

namespace {

LinearOperator defect_operator(const LinearOperator& a, const LinearOperator& b) {
  if (!a.is_square() || !b.is_square()) throw ArgumentError("double_defect: operators must be square");
  const LinearOperator lhs = embed_alice(a, b.rows()).with_dims(Dims{a.rows(), b.rows()});
  const LinearOperator rhs = embed_bob(a.rows(), b).with_dims(Dims{a.rows(), b.rows()});
  return lhs - rhs;
}

}  // namespace

DoubleDefect double_defect(const LinearOperator& rho, const LinearOperator& a, const LinearOperator& b) {
  const LinearOperator dd = defect_operator(a, b);
  if (rho.rows() != dd.rows()) throw ArgumentError("double_defect: state and operators disagree on dimension");
  const Matrix& m = dd.matrix();
  DoubleDefect out;
  out.forward = (rho.matrix() * m.adjoint() * m).trace().real();
  out.backward = (rho.matrix() * m * m.adjoint()).trace().real();
  return out;
}

DoubleDefect double_defect(const Vector& psi, const LinearOperator& a, const LinearOperator& b) {
  const LinearOperator dd = defect_operator(a, b);
  if (static_cast<std::size_t>(psi.size()) != dd.rows()) {
    throw ArgumentError("double_defect: state and operators disagree on dimension");
  }
  return DoubleDefect{(dd.matrix() * psi).squaredNorm(), (dd.matrix().adjoint() * psi).squaredNorm()};
}

LinearOperator mirror_to_bob(const ModularData& md, const LinearOperator& a) {
  const std::size_t d = md.dim();
  if (a.rows() != d || !a.is_square()) throw ArgumentError("find_double: operator must act on Alice's factor");
  const LinearOperator full = md.conj_j.conjugate_operator(embed_alice(a.adjoint(), d).with_dims(Dims{d, d}));
  return (1.0 / static_cast<double>(d)) * partial_trace(full, kAlice);
}

std::optional<LinearOperator> find_double(const ModularData& md, const LinearOperator& a) {
  if (a.rows() != md.dim() || !a.is_square()) throw ArgumentError("find_double: operator must act on Alice's factor");
  if (operator_norm(commutator(a, md.rho_a)) > kCentralizerThreshold) return std::nullopt;
  return mirror_to_bob(md, a);
}

}  // namespace infent
