#include <array>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "infent/bipartite.hpp"
#include "infent/nopa.hpp"
#include "infent/random.hpp"

using namespace infent;

namespace {

/// |chi| from the covariance form, split into the S directions and their complement.
double chi_modulus(double r, double xi1, double xi2, double eta1, double eta2) {
  const double xp = (xi1 + xi2) / std::sqrt(2.0), xm = (xi1 - xi2) / std::sqrt(2.0);
  const double ep = (eta1 + eta2) / std::sqrt(2.0), em = (eta1 - eta2) / std::sqrt(2.0);
  return std::exp(-0.25 * (std::exp(-2 * r) * (xp * xp + em * em) + std::exp(2 * r) * (xm * xm + ep * ep)));
}

}  // namespace

TEST_SUITE("nopa") {
  TEST_CASE("parameters") {
    const NopaParams p = NopaParams::from_r(5.0, 64);
    CHECK(std::abs(p.lambda - 0.9999092042625951) <= 1e-15);
    CHECK(std::abs(std::tanh(p.r) - p.lambda) <= 1e-12);
    const NopaParams q = NopaParams::from_lambda(0.5, 16);
    CHECK(std::abs(std::tanh(q.r) - 0.5) <= 1e-12);
    CHECK(std::abs(q.tail_weight() - std::pow(0.5, 32)) <= 1e-25);
    CHECK_THROWS_AS(NopaParams::from_lambda(1.0, 16), ArgumentError);
    CHECK_THROWS_AS(NopaParams::from_lambda(-0.1, 16), ArgumentError);
    CHECK_THROWS_AS(NopaParams::from_lambda(0.5, 1), ArgumentError);
    CHECK_THROWS_AS(NopaParams::from_r(-1.0, 16), ArgumentError);
    CHECK_THROWS_AS(NopaParams::from_lambda(0.9, 8).require_tail(1e-12, "test"), TruncationError);
    CHECK_NOTHROW(NopaParams::from_lambda(0.9, 256).require_tail(1e-10, "test"));
  }

  TEST_CASE("state construction") {
    const FockVector vac = nopa_state(NopaParams::from_lambda(0.0, 8));
    CHECK(std::abs(vac.coefficients()(0, 0) - Complex(1.0)) <= 1e-15);
    CHECK(std::abs(vac.norm() - 1.0) <= 1e-15);
    const FockVector psi = nopa_state(NopaParams::from_lambda(0.7, 20));
    CHECK(std::abs(psi.norm() - 1.0) <= 1e-10);
    const Matrix& c = psi.coefficients();
    for (Eigen::Index i = 0; i < 20; ++i)
      for (Eigen::Index j = 0; j < 20; ++j)
        if (i != j) CHECK(c(i, j) == Complex(0.0));
    for (Eigen::Index n = 1; n < 20; ++n) CHECK(std::abs(c(n, n) / c(n - 1, n - 1) - Complex(0.7)) <= 1e-14);
  }

  TEST_CASE("entropy") {
    const double closed = nopa_entropy_closed_form(0.5);
    CHECK(std::abs(closed - 1.0817041659455104) <= 1e-15);
    CHECK(std::abs(nopa_entropy(NopaParams::from_lambda(0.5, 64)) - closed) <= 1e-9);
    CHECK(nopa_entropy_closed_form(0.0) == 0.0);
    double prev = -1.0;
    for (double l : {0.0, 0.1, 0.3, 0.5, 0.7, 0.8, 0.9}) {
      const double h = nopa_entropy(NopaParams::from_lambda(l, 512));
      CHECK(h > prev);
      prev = h;
    }
  }

  TEST_CASE("extraction") {
    const NopaParams p = NopaParams::from_lambda(0.9, 256);
    const Extraction ex = extract_qudit(p, 2);
    CHECK(ex.residual <= 1e-10);
    CHECK(std::abs(ex.coarse_params.lambda - 0.81) <= 1e-15);
    CHECK(ex.coarse.trunc() == 128);
    CHECK_THROWS_AS(extract_qudit(NopaParams::from_lambda(0.9, 255), 2), ArgumentError);
    CHECK_THROWS_AS(extract_qudit(p, 1), ArgumentError);
    // Qudit part is proportional to sum_r lambda^r e_r (x) e_r.
    const Matrix& q = ex.qudit.coefficients();
    CHECK(std::abs(q(1, 1) / q(0, 0) - Complex(0.9)) <= 1e-12);
    CHECK(std::abs(q(0, 1)) <= 1e-15);
  }

  TEST_CASE("extraction fidelity") {
    CHECK(std::abs(extraction_fidelity_closed_form(0.99, 2) - 0.99997475) <= 5e-9);
    for (std::size_t d : {2, 3, 4}) {
      for (double l : {0.5, 0.9, 0.99}) {
        const std::size_t n = d * 240;
        const Extraction ex = extract_qudit(NopaParams::from_lambda(l, n), d);
        CHECK(std::abs(ex.fidelity - extraction_fidelity_closed_form(l, d)) <= 1e-10);
        CHECK(std::abs(fidelity(ex.qudit.density(), d) - extraction_fidelity_closed_form(l, d)) <= 1e-10);
      }
      double prev = 0.0;
      for (double l : {0.9, 0.99, 0.999}) {
        const double f = extraction_fidelity_closed_form(l, d);
        CHECK(f > prev);
        CHECK(f < 1.0);
        prev = f;
      }
      CHECK(1.0 - extraction_fidelity_closed_form(0.999999, d) <= 1e-9);
    }
  }

  TEST_CASE("repeated extraction") {
    NopaParams p = NopaParams::from_lambda(0.95, 512);
    double l = 0.95;
    for (int round = 0; round < 3; ++round) {
      const Extraction ex = extract_qudit(p, 2);
      CHECK(ex.residual <= 1e-10);
      l = l * l;
      CHECK(std::abs(ex.coarse_params.lambda - l) <= 1e-14);
      CHECK(std::abs(ex.fidelity - extraction_fidelity_closed_form(p.lambda, 2)) <= 1e-10);
      p = ex.coarse_params;
    }
  }

  TEST_CASE("permutation isometries") {
    const PermIsometry even = PermIsometry::even();
    CHECK(even(5) == 10);
    CHECK(PermIsometry::odd()(5) == 11);
    CHECK(PermIsometry::local_swaps()(4) == 5);
    CHECK(PermIsometry::local_swaps()(5) == 4);
    CHECK(PermIsometry::shift(3)(2) == 5);
    CHECK_FALSE(even.ell().has_value());
    CHECK(PermIsometry::local_swaps().ell() == 1u);
    const PermIsometry collapse("collapse", [](std::uint64_t n) { return n / 2; }, std::nullopt);
    CHECK_THROWS_AS(collapse.validate(8), PreconditionError);
    const PermIsometry far("far", [](std::uint64_t n) { return n + 3; }, 2);
    CHECK_THROWS_AS(far.validate(8), PreconditionError);
    CHECK_NOTHROW(PermIsometry::shift(2).validate(64));
    const Matrix m = PermIsometry::shift(1).matrix(4);
    CHECK(m(1, 0) == Complex(1.0));
    CHECK(m(3, 2) == Complex(1.0));
    CHECK(m.col(3).norm() == 0.0);
  }

  TEST_CASE("perm defect examples") {
    const NopaParams p = NopaParams::from_lambda(0.9, 512);
    CHECK(perm_defect(p, PermIsometry::identity()) == 0.0);
    const double shift = perm_defect(p, PermIsometry::shift(1));
    CHECK(std::abs(shift - 0.01) <= 1e-12);
    CHECK(shift <= perm_defect_bound(0.9, 1));
    CHECK(std::abs(perm_defect_bound(0.9, 1) - 0.012345679012345678) <= 1e-15);
    CHECK(std::abs(perm_defect(p, PermIsometry::even()) - 0.15027216570508246519) <= 1e-10);
    CHECK(std::abs(even_defect_closed_form(0.9) - 0.15027216570508246519) <= 1e-14);
    CHECK(std::abs(perm_defect(p, PermIsometry::odd()) - 0.18552119222849687) <= 1e-10);
    CHECK(std::abs(even_defect_closed_form(0.99) - 0.16500277726341305953) <= 1e-14);
    CHECK(std::abs(odd_defect_closed_form(0.99) - 0.16835300200327829766) <= 1e-14);
    CHECK_THROWS_AS(perm_defect(NopaParams::from_lambda(0.9, 16), PermIsometry::shift(1)), TruncationError);
  }

  TEST_CASE("even and odd defects tend to 1/6") {
    double prev_gap = 1.0;
    for (double l : {0.9, 0.99, 0.999, 0.9999}) {
      const double gap = std::abs(even_defect_closed_form(l) - 1.0 / 6.0);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-4);
    CHECK(std::abs(odd_defect_closed_form(0.9999) - 1.0 / 6.0) <= 1e-3);
    CHECK(std::abs(perm_defect(NopaParams::from_lambda(0.999, 20000), PermIsometry::even()) - even_defect_closed_form(0.999)) <= 1e-10);
  }

  TEST_CASE("finite-distance defects obey the bound and vanish as lambda -> 1") {
    for (double l : {0.5, 0.9, 0.99, 0.999}) {
      const std::size_t n = static_cast<std::size_t>(std::ceil(std::log(1e-14) / (2.0 * std::log(l)))) + 2;
      const NopaParams p = NopaParams::from_lambda(l, n);
      for (std::uint64_t ell : {1u, 2u, 5u}) {
        const double d = perm_defect(p, PermIsometry::shift(ell));
        CHECK(std::abs(d - shift_defect_closed_form(l, ell)) <= 1e-10);
        CHECK(d <= perm_defect_bound(l, ell) + 1e-12);
      }
      const double sw = perm_defect(p, PermIsometry::local_swaps());
      CHECK(std::abs(sw - swap_defect_closed_form(l)) <= 1e-10);
      CHECK(sw <= perm_defect_bound(l, 1) + 1e-12);
    }
    CHECK(shift_defect_closed_form(0.9999, 1) <= 1e-7);
  }

  TEST_CASE("even isometry is not unitary") {
    for (std::size_t n : {16, 64, 256}) {
      const IsometryGap g = isometry_gap(PermIsometry::even(), n);
      CHECK(g.domain == n / 2);
      CHECK(g.isometry_residual == 0.0);
      CHECK(std::abs(g.range_trace - static_cast<double>(n) / 2.0) <= 1e-12);
      CHECK(std::abs(g.deficit - static_cast<double>(n) / 2.0) <= 1e-12);
      const IsometryGap sw = isometry_gap(PermIsometry::local_swaps(), n);
      CHECK(sw.domain == n);
      CHECK(sw.deficit == 0.0);
    }
  }

  TEST_CASE("Hamiltonian functions are doubled") {
    const NopaParams p = NopaParams::from_lambda(0.8, 128);
    CHECK(hamiltonian_double_check(p, [](std::uint64_t n) { return Complex(static_cast<double>(n) + 0.5); }) == 0.0);
    CHECK(hamiltonian_double_check(p, [](std::uint64_t n) { return Complex(n % 2 ? -1.0 : 1.0); }) == 0.0);
    Rng rng(71);
    std::vector<Complex> values(128);
    for (auto& v : values) v = Complex(std::normal_distribution<double>()(rng), 0.0);
    const auto f = [&](std::uint64_t n) { return values[n]; };
    CHECK(hamiltonian_double_check(p, f) == 0.0);
    Matrix c = nopa_state(p).coefficients();
    c(0, 1) = 0.1;
    CHECK(hamiltonian_double_check(FockVector(c).normalized(), f) > 1e-3);
  }

  TEST_CASE("EPR variances") {
    const EprVariances v0 = epr_covariance(0.0);
    CHECK(v0.var_qdiff == 1.0);
    CHECK(v0.var_psum == 1.0);
    CHECK(v0.var_qsum == 1.0);
    CHECK(v0.var_pdiff == 1.0);
    const EprVariances v5 = epr_covariance(5.0);
    CHECK(std::abs(v5.var_qdiff - 4.5399929762484854e-5) <= 1e-18);
    for (double r : {0.1, 1.0, 2.5, 5.0}) {
      const EprVariances v = epr_covariance(r);
      const double l = std::tanh(r);
      CHECK(std::abs(v.var_qdiff * v.var_qsum - 1.0) <= 1e-12);
      CHECK(std::abs(v.var_psum * v.var_pdiff - 1.0) <= 1e-12);
      CHECK(std::abs(v.var_qdiff - (1 - l) / (1 + l)) <= 1e-12);
    }
    CHECK_THROWS_AS(epr_covariance(-0.5), ArgumentError);
  }

  TEST_CASE("Fock second moments match the closed forms") {
    for (double r : {0.5, 1.0, 2.0}) {
      const SecondMoments m = fock_second_moments(NopaParams::from_r(r, 512));
      const EprVariances v = epr_covariance(r);
      CHECK(std::abs(m.combos.var_qdiff - v.var_qdiff) <= 1e-8);
      CHECK(std::abs(m.combos.var_psum - v.var_psum) <= 1e-8);
      CHECK(std::abs(m.combos.var_qsum - v.var_qsum) <= 1e-8);
      CHECK(std::abs(m.combos.var_pdiff - v.var_pdiff) <= 1e-8);
      CHECK(std::abs(m.var_q1 - 0.5 * std::cosh(2 * r)) <= 1e-8);
    }
    // Five squeezing units need far more than 512 levels.
    CHECK_THROWS_AS(fock_second_moments(NopaParams::from_r(5.0, 512)), TruncationError);
  }

  TEST_CASE("characteristic function") {
    CHECK(characteristic_fn(2.0, 0, 0, 0, 0) == Complex(1.0));
    CHECK(characteristic_fn(0.0, 0, 0, 0, 0, 3.0) == Complex(1.0));
    for (double r : {0.0, 0.7, 5.0}) {
      const Complex c = characteristic_fn(r, 0.3, -1.1, 0.4, 0.9);
      CHECK(std::abs(std::abs(c) - chi_modulus(r, 0.3, -1.1, 0.4, 0.9)) <= 1e-14);
      CHECK(std::abs(std::abs(characteristic_fn(r, 0.3, -1.1, 0.4, 0.9, 2.0)) - std::abs(c)) <= 1e-14);
    }
    // On S the value tends to 1.
    const double xi = 1.3, eta = -0.6;
    const Complex on = characteristic_fn(5.0, xi, xi, eta, -eta);
    CHECK(std::abs(1.0 - on) <= std::exp(-10.0) * (2 * xi * xi + 2 * eta * eta) / 2.0);
    // Unit off-S component.
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
      const double s = 1.0 / std::sqrt(2.0);
      CHECK(std::abs(characteristic_fn(r, s, -s, 0.0, 0.0)) <= std::exp(-std::exp(2 * r) / 4.0) * (1 + 1e-12));
      CHECK(std::abs(characteristic_fn(r, 0.0, 0.0, s, s)) <= std::exp(-std::exp(2 * r) / 4.0) * (1 + 1e-12));
    }
    CHECK_THROWS_AS(characteristic_fn(-1.0, 0, 0, 0, 0), ArgumentError);
  }

  TEST_CASE("characteristic function against the Fock state") {
    for (double r : {0.3, 0.8}) {
      const NopaParams p = NopaParams::from_r(r, 96);
      for (const auto& v : std::vector<std::array<double, 4>>{{1, 1, 1, -1}, {0.5, -0.2, 0.1, 0.7}, {0, 0.9, -0.4, 0}}) {
        const Complex a = characteristic_fn(r, v[0], v[1], v[2], v[3]);
        const Complex b = characteristic_fn_fock(p, v[0], v[1], v[2], v[3]);
        CHECK(std::abs(a - b) <= 1e-6);
      }
    }
  }

  TEST_CASE("reduced state purity tends to zero") {
    double prev = 2.0;
    for (double l : {0.0, 0.5, 0.9, 0.99}) {
      const std::size_t n = l == 0.0 ? 4 : static_cast<std::size_t>(std::ceil(std::log(1e-14) / (2.0 * std::log(l)))) + 2;
      const double purity = nopa_reduced_purity(NopaParams::from_lambda(l, n));
      CHECK(std::abs(purity - (1 - l * l) / (1 + l * l)) <= 1e-10);
      CHECK(purity < prev);
      prev = purity;
    }
    CHECK(prev <= 0.011);
  }
}
