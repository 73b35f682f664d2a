#include "infent/bipartite.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace infent {

BipartitePureState::BipartitePureState(Matrix coeff) : coeff_(std::move(coeff)) {
  if (coeff_.size() == 0) throw ArgumentError("BipartitePureState: empty coefficient matrix");
  if (std::abs(coeff_.norm() - 1.0) > tol::kStructural) {
    throw PreconditionError("BipartitePureState: coefficient matrix is not normalized");
  }
}

BipartitePureState BipartitePureState::normalized(Matrix coeff) {
  const double n = coeff.norm();
  if (n == 0.0) throw ArgumentError("BipartitePureState::normalized: zero vector");
  coeff /= n;
  return BipartitePureState(std::move(coeff));
}

BipartitePureState BipartitePureState::from_vector(const Vector& v, std::size_t da, std::size_t db) {
  if (static_cast<std::size_t>(v.size()) != da * db) throw ArgumentError("from_vector: size mismatch");
  Matrix c(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = v(i * c.cols() + j);
  return BipartitePureState(std::move(c));
}

Vector BipartitePureState::vector() const {
  Vector v(coeff_.size());
  for (Eigen::Index i = 0; i < coeff_.rows(); ++i)
    for (Eigen::Index j = 0; j < coeff_.cols(); ++j) v(i * coeff_.cols() + j) = coeff_(i, j);
  return v;
}

LinearOperator BipartitePureState::density() const {
  return LinearOperator::projector(vector(), Dims{dim_a(), dim_b()});
}

SchmidtData schmidt(const BipartitePureState& psi) {
  const Matrix& c = psi.coefficients();
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtData out;
  const auto& s = svd.singularValues();
  out.coefficients.assign(s.data(), s.data() + s.size());
  out.left = svd.matrixU();
  // C = U S V^dagger, so the right Schmidt vectors are conj(V) columns.
  out.right = svd.matrixV().conjugate();

  double sum = 0.0;
  for (double x : out.coefficients) sum += x * x;
  if (std::abs(sum - 1.0) > tol::kSpectral) throw PreconditionError("schmidt: coefficients not normalized");

  Matrix rebuilt = out.left * s.cast<Complex>().asDiagonal() * out.right.transpose();
  if ((rebuilt - c).norm() > tol::kSpectral) throw PreconditionError("schmidt: reconstruction failed");
  return out;
}

double entropy(const SchmidtData& s) {
  double h = 0.0;
  for (double c : s.coefficients) {
    const double p = c * c;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

SchmidtData divergent_family(std::size_t n) {
  if (n < 2) throw ArgumentError("divergent_family: truncation must be at least 2");
  SchmidtData out;
  out.coefficients.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = static_cast<double>(k) + 2.0;
    const double lg = std::log2(m);
    const double weight = 1.0 / (m * lg * lg);
    out.coefficients[k] = weight;
    total += weight;
  }
  for (double& c : out.coefficients) c = std::sqrt(c / total);
  return out;
}

BipartitePureState max_entangled(std::size_t d) {
  if (d < 2) throw ArgumentError("max_entangled: dimension must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  Matrix c = Matrix::Identity(n, n) / std::sqrt(static_cast<double>(d));
  return BipartitePureState::normalized(std::move(c));
}

LinearOperator max_entangled_projector(std::size_t d) { return max_entangled(d).density(); }

double fidelity(const LinearOperator& rho, std::size_t d) {
  require_density(rho, "fidelity");
  if (rho.rows() != d * d) throw ArgumentError("fidelity: density is not on C^d (x) C^d");
  // <Omega| rho |Omega> = (1/d) sum_{k,l} rho(kk, ll)
  const auto n = static_cast<Eigen::Index>(d);
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) acc += rho.matrix()(k * n + k, l * n + l);
  return acc.real() / static_cast<double>(d);
}

PptReport ppt_fidelity_bound_check(const LinearOperator& rho) {
  require_density(rho, "ppt_fidelity_bound_check");
  if (rho.dims().size() != 2 || rho.dims()[0] != rho.dims()[1]) {
    throw ArgumentError("ppt_fidelity_bound_check: density must live on C^d (x) C^d");
  }
  const std::size_t d = rho.dims()[0];
  PptReport r;
  r.min_pt_eigenvalue = min_eigenvalue(partial_transpose(rho, kBob));
  r.is_ppt = r.min_pt_eigenvalue >= kPptThreshold;
  r.fidelity = fidelity(rho, d);
  r.bound_respected = !r.is_ppt || r.fidelity <= 1.0 / static_cast<double>(d) + tol::kSpectral;
  return r;
}

LinearOperator isotropic_state(std::size_t d, double singlet_fraction) {
  if (d < 2) throw ArgumentError("isotropic_state: dimension must be at least 2");
  if (singlet_fraction < 0.0 || singlet_fraction > 1.0) {
    throw ArgumentError("isotropic_state: singlet fraction must lie in [0, 1]");
  }
  const LinearOperator p = max_entangled_projector(d);
  const auto n = static_cast<Eigen::Index>(d * d);
  const Matrix rest = (Matrix::Identity(n, n) - p.matrix()) / static_cast<double>(d * d - 1);
  return LinearOperator(singlet_fraction * p.matrix() + (1.0 - singlet_fraction) * rest, Dims{d, d});
}

}  // namespace infent
