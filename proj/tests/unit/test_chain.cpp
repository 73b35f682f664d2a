#include <cmath>
#include <string>

#include "helpers.hpp"
#include "infent/bell.hpp"
#include "infent/chain.hpp"
#include "infent/random.hpp"

using namespace infent;
using infent::test::basis_projector;
using infent::test::diff;

namespace {

LinearOperator pair_block(const LinearOperator& alice, const LinearOperator& bob) { return tensor(alice, bob); }

LinearOperator id2() { return LinearOperator::identity(2); }

ChainObservable random_local(const PairIndex& k, Rng& rng) {
  return ChainObservable::local(k, LinearOperator(random_ginibre(4, 4, rng), {2, 2}));
}

}  // namespace

TEST_SUITE("chain") {
  TEST_CASE("expectation examples") {
    const ChainState s;
    CHECK(std::abs(expect(s, ChainObservable{}) - Complex(1.0)) <= 1e-15);
    CHECK(std::abs(expect(s, ChainObservable::local(PairIndex(137), pair_block(pauli_z(), id2())))) <= 1e-12);
    for (const PairIndex k : {PairIndex(0), PairIndex(5), PairIndex(1000000), PairIndex("98765432109876543210")}) {
      const Complex v = expect(s, ChainObservable::local(k, pair_block(pauli_x(), pauli_x())));
      CHECK(std::abs(v - Complex(-1.0)) <= 1e-12);
    }
  }

  TEST_CASE("singlet sign convention") {
    const Vector s = singlet_vector();
    CHECK(std::abs(s(1) - Complex(1.0 / std::sqrt(2.0))) <= 1e-15);
    CHECK(std::abs(s(2) + Complex(1.0 / std::sqrt(2.0))) <= 1e-15);
    CHECK(std::abs(s(0)) == 0.0);
    CHECK(std::abs(s(3)) == 0.0);
    CHECK(is_density(singlet_density()));
  }

  TEST_CASE("observable construction") {
    CHECK_THROWS_AS(ChainObservable::local(PairIndex(0), pauli_x()), ArgumentError);
    CHECK_THROWS_AS(ChainObservable::local(PairIndex(-1), LinearOperator::identity(Dims{2, 2})), ArgumentError);
    const ChainObservable a = ChainObservable::local(PairIndex(2), pair_block(pauli_x(), id2()));
    const ChainObservable b = a.with(PairIndex(2), pair_block(pauli_y(), id2()));
    REQUIRE(b.support().size() == 1);
    CHECK(diff(b.support().at(PairIndex(2)), pair_block(pauli_x() * pauli_y(), id2())) <= 1e-15);
    CHECK(ChainObservable{}.is_identity());
  }

  TEST_CASE("restrict") {
    const ChainState s;
    for (int k : {0, 1, 42}) CHECK(diff(restrict(s, PairIndex(k)), singlet_density()) <= 1e-15);
    const LinearOperator zero_zero = basis_projector(4, 0, {2, 2});
    const ChainState t = s.with_override(PairIndex(3), zero_zero);
    CHECK(diff(restrict(t, PairIndex(3)), zero_zero) <= 1e-15);
    CHECK(diff(restrict(t, PairIndex(4)), singlet_density()) <= 1e-15);
    CHECK_THROWS_AS(s.with_override(PairIndex(0), 2.0 * zero_zero), PreconditionError);
    CHECK_THROWS_AS(s.with_override(PairIndex(0), LinearOperator::identity(4)), PreconditionError);
  }

  TEST_CASE("every pair restriction is maximally violating") {
    const ChainState s;
    for (const PairIndex k : {PairIndex(0), PairIndex(10), PairIndex(1000000)}) {
      RestartOptions opt;
      opt.seed = 2;
      CHECK(std::abs(beta_optimize_restarts(restrict(s, k), opt).best.beta - std::sqrt(2.0)) <= 1e-6);
    }
  }

  TEST_CASE("expectation with overrides") {
    Rng rng(51);
    const LinearOperator rho = random_density(4, rng).with_dims({2, 2});
    const ChainState s = ChainState{}.with_override(PairIndex(7), rho);
    const ChainObservable a = random_local(PairIndex(7), rng);
    CHECK(std::abs(expect(s, a) - (rho * a.support().at(PairIndex(7))).trace()) <= 1e-12);
    const ChainObservable elsewhere = random_local(PairIndex(8), rng);
    CHECK(std::abs(expect(s, elsewhere) - expect(ChainState{}, elsewhere)) <= 1e-15);
  }

  TEST_CASE("factorization over disjoint supports") {
    Rng rng(52);
    ChainState s;
    for (int j = 0; j < 6; j += 2) s = s.with_override(PairIndex(j), random_density(4, rng).with_dims({2, 2}));
    for (int t = 0; t < 50; ++t) {
      const ChainObservable a = random_local(PairIndex(t % 6), rng) * random_local(PairIndex(100), rng);
      const ChainObservable b = random_local(PairIndex(6 + t % 5), rng) * random_local(PairIndex(200), rng);
      CHECK(std::abs(expect(s, a * b) - expect(s, a) * expect(s, b)) <= 1e-12);
    }
  }

  TEST_CASE("dense window agrees with the chain functional") {
    Rng rng(53);
    for (std::size_t m = 1; m <= 8; ++m) {
      ChainObservable a;
      for (std::size_t k = 0; k < m; k += 1 + (k % 2)) a = a * random_local(PairIndex(k), rng);
      const Complex dense = window_expect(a, m);
      CHECK(std::abs(dense - expect(ChainState{}, a)) <= 1e-12);
      CHECK(std::abs(window_vector(m).norm() - 1.0) <= 1e-12);
    }
    CHECK_THROWS_AS(window_vector(9), SizeError);
    CHECK_THROWS_AS(window_expect(random_local(PairIndex(3), rng), 3), ArgumentError);
  }

  TEST_CASE("window vector is pair-major") {
    // Pair 0 most significant: coefficient of |a0 b0 a1 b1> is s(a0 b0) s(a1 b1).
    const Vector phi = window_vector(2);
    const Vector s = singlet_vector();
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(phi(i * 4 + j) - s(i) * s(j)) <= 1e-15);
  }

  TEST_CASE("pairs beyond the overrides are exactly the singlet") {
    Rng rng(54);
    ChainState s;
    for (int j = 0; j < 20; ++j) s = s.with_override(PairIndex(j), random_density(4, rng).with_dims({2, 2}));
    for (int k = 20; k < 40; ++k) {
      const LinearOperator r = restrict(s, PairIndex(k));
      CHECK(std::abs((singlet_vector().adjoint() * r.matrix() * singlet_vector())(0, 0) - Complex(1.0)) <= 1e-15);
    }
  }

  TEST_CASE("Alice window marginal is the normalized trace") {
    Rng rng(55);
    // Product Alice observables through the chain functional.
    for (std::size_t m = 1; m <= 5; ++m) {
      ChainObservable a;
      Complex tr = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        const LinearOperator x(random_ginibre(2, 2, rng));
        a = a.with(PairIndex(k), pair_block(x, id2()));
        tr *= x.trace();
      }
      CHECK(std::abs(expect(ChainState{}, a) - tr / std::pow(2.0, static_cast<double>(m))) <= 1e-12);
    }
    // A generic (entangling) Alice operator on a two-pair window, applied densely.
    const Matrix x = random_ginibre(4, 4, rng);
    const Vector phi = window_vector(2);
    Vector xphi = Vector::Zero(16);
    for (int a0 = 0; a0 < 2; ++a0)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int a1 = 0; a1 < 2; ++a1)
          for (int b1 = 0; b1 < 2; ++b1)
            for (int c0 = 0; c0 < 2; ++c0)
              for (int c1 = 0; c1 < 2; ++c1)
                xphi(8 * a0 + 4 * b0 + 2 * a1 + b1) += x(2 * a0 + a1, 2 * c0 + c1) * phi(8 * c0 + 4 * b0 + 2 * c1 + b1);
    CHECK(std::abs(phi.dot(xphi) - x.trace() / 4.0) <= 1e-12);
  }

  TEST_CASE("even/odd split") {
    const ChainSplit halves = split_even_odd(ChainState{});
    CHECK(halves.even.is_default());
    CHECK(halves.odd.is_default());
    const ChainObservable xx = ChainObservable::local(PairIndex(0), pair_block(pauli_x(), pauli_x()));
    CHECK(std::abs(expect(halves.even, xx) - Complex(-1.0)) <= 1e-12);
    CHECK(std::abs(expect(halves.odd, xx) - Complex(-1.0)) <= 1e-12);
    CHECK(std::abs(expect(halves.even, ChainObservable{}) - Complex(1.0)) <= 1e-15);
    CHECK(std::abs(expect(halves.odd, ChainObservable{}) - Complex(1.0)) <= 1e-15);
    for (int j = 0; j <= 10; ++j) {
      CHECK(diff(restrict(halves.even, PairIndex(j)), singlet_density()) <= 1e-15);
      CHECK(diff(restrict(halves.odd, PairIndex(j)), singlet_density()) <= 1e-15);
    }
    CHECK(half_to_parent(PairIndex(5), 0) == PairIndex(10));
    CHECK(half_to_parent(PairIndex(5), 1) == PairIndex(11));
    CHECK_THROWS_AS(half_to_parent(PairIndex(5), 2), ArgumentError);
    CHECK_THROWS_AS(split_even_odd(ChainState{}.with_override(PairIndex(1), basis_projector(4, 0, {2, 2}))),
                    UnsupportedError);
  }

  TEST_CASE("lifting from a half preserves expectations") {
    Rng rng(56);
    const ChainSplit halves = split_even_odd(ChainState{});
    for (int parity : {0, 1}) {
      const ChainObservable a = random_local(PairIndex(1), rng) * random_local(PairIndex(4), rng);
      const ChainObservable lifted = lift_from_half(a, parity);
      CHECK(lifted.support().count(half_to_parent(PairIndex(4), parity)) == 1);
      CHECK(std::abs(expect(parity == 0 ? halves.even : halves.odd, a) - expect(ChainState{}, lifted)) <= 1e-12);
    }
  }

  TEST_CASE("finite-window commutant of Alice is Bob's algebra") {
    for (std::size_t m = 1; m <= 3; ++m) {
      const CommutantReport r = window_commutant_pauli(m);
      CHECK(r.dimension == r.bob_dimension);
      CHECK(r.equals_bob_algebra);
    }
    for (std::size_t m = 1; m <= 2; ++m) {
      const CommutantReport r = window_commutant_dense(m);
      CHECK(r.dimension == static_cast<std::size_t>(std::pow(4, m)));
      CHECK(r.equals_bob_algebra);
    }
    CHECK_THROWS_AS(window_commutant_pauli(4), ArgumentError);
    CHECK_THROWS_AS(window_commutant_dense(3), ArgumentError);
  }

  TEST_CASE("JSON round trip") {
    Rng rng(57);
    const ChainObservable a = random_local(PairIndex("123456789012345678901234567890"), rng) * random_local(PairIndex(3), rng);
    const ChainObservable back = ChainObservable::from_json(a.to_json());
    REQUIRE(back.support().size() == 2);
    for (const auto& [k, block] : a.support()) CHECK(diff(back.support().at(k), block) == 0.0);
    CHECK(back.to_json() == a.to_json());

    const ChainState s = ChainState{}.with_override(PairIndex(9), random_density(4, rng).with_dims({2, 2}));
    const ChainState s2 = ChainState::from_json(s.to_json());
    CHECK(diff(restrict(s2, PairIndex(9)), restrict(s, PairIndex(9))) == 0.0);

    CHECK_THROWS_AS(ChainObservable::from_json("not json"), ArgumentError);
    CHECK_THROWS_AS(ChainObservable::from_json(R"({"support": {"0": [[1,0]]}})"), ArgumentError);
    CHECK_THROWS_AS(ChainObservable::from_json(R"({"support": {"-2": []}})"), ArgumentError);
    std::string eye = R"({"support": {"0": [)";
    for (int i = 0; i < 16; ++i) eye += std::string(i ? "," : "") + (i % 5 == 0 ? "[1,0]" : "[0,0]");
    eye += "]}}";
    CHECK(ChainObservable::from_json(eye).support().size() == 1);
    CHECK_THROWS_AS(ChainState::from_json(eye.replace(eye.find("[1,0]"), 5, "[2,0]")), PreconditionError);
  }
}
