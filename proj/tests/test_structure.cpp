#include <doctest.h>

#include <random>

#include "ncmech/structure.hpp"
#include "support.hpp"

using namespace ncmech;
using namespace ncmech::testing;

TEST_SUITE("structure") {

TEST_CASE("canonical bracket table") {
  const Scalar T = q(2, 5);
  const BracketStructure s = BracketStructure::canonical(ThetaMatrix::planar(T));
  const std::size_t N = 4;
  const Polynomial x1 = var(N, 0), x2 = var(N, 1), p1 = var(N, 2), p2 = var(N, 3);
  CHECK(phase_bracket(x1, p1, s) == Polynomial::constant(N, q(1)));
  CHECK(phase_bracket(x1, p2, s).is_zero());
  CHECK(phase_bracket(p1, p2, s).is_zero());
  CHECK(phase_bracket(x1, x2, s) == Polynomial::constant(N, T));
  CHECK_THROWS_AS(phase_bracket(var(2, 0), x1, s), DimensionError);
}

TEST_CASE("commutative limit is the standard symplectic table") {
  const BracketStructure s = BracketStructure::canonical(ThetaMatrix::zero(3));
  const PolynomialMatrix om = s.omega();
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      Scalar expect = q(0);
      if (a < 3 && b == a + 3) expect = q(1);
      if (a >= 3 && b == a - 3) expect = q(-1);
      CHECK(om(a, b) == (expect.is_zero() ? Polynomial(6) : Polynomial::constant(6, expect)));
    }
  }
}

TEST_CASE("Jacobi identity for canonical phase brackets") {
  std::mt19937 rng(5);
  const BracketStructure s = BracketStructure::canonical(random_theta(rng, 2));
  for (int t = 0; t < 20; ++t) {
    const Polynomial F = random_poly(rng, 4, 3), G = random_poly(rng, 4, 3), H = random_poly(rng, 4, 3);
    const Polynomial jac = phase_bracket(F, phase_bracket(G, H, s), s) + phase_bracket(G, phase_bracket(H, F, s), s) +
                           phase_bracket(H, phase_bracket(F, G, s), s);
    CHECK(jac.is_zero());
  }
}

TEST_CASE("duval-horvathy table for constant B") {
  const Scalar e = q(2), T = q(1, 3), B = q(3, 4);
  const BracketStructure s = BracketStructure::duval_horvathy(ThetaMatrix::planar(T), e, Polynomial::constant(2, B));
  const Scalar d = q(1) - e * T * B;
  const std::size_t N = 4;
  const Polynomial x1 = var(N, 0), x2 = var(N, 1), p1 = var(N, 2), p2 = var(N, 3);
  CHECK(phase_bracket(x1, x2, s) == Polynomial::constant(N, T * d));
  CHECK(phase_bracket(x1, p1, s) == Polynomial::constant(N, d));
  CHECK(phase_bracket(x2, p2, s) == Polynomial::constant(N, d));
  CHECK(phase_bracket(x1, p2, s).is_zero());
  CHECK(phase_bracket(p1, p2, s) == Polynomial::constant(N, e * B * d));

  const BracketStructure flat =
      BracketStructure::duval_horvathy(ThetaMatrix::zero(2), e, Polynomial::constant(2, B));
  CHECK(phase_bracket(x1, p1, flat) == Polynomial::constant(N, q(1)));
  CHECK(phase_bracket(x1, x2, flat).is_zero());
}

TEST_CASE("duval-horvathy with non-constant B is pointwise only") {
  const Polynomial B = var(2, 0) + Polynomial::constant(2, q(1));
  const BracketStructure s = BracketStructure::duval_horvathy(ThetaMatrix::planar(q(1, 2)), q(1), B);
  CHECK_FALSE(s.is_symbolic());
  CHECK_THROWS_AS(s.omega(), InvalidArgument);
  std::vector<double> om(16);
  s.omega_at(std::vector<double>{1.0, 0.0, 0.0, 0.0}, om);
  CHECK(om[0 * 4 + 2] == doctest::Approx(0.0));  // d = 1 - 0.5*2 = 0
  s.omega_at(std::vector<double>{-1.0, 0.0, 0.0, 0.0}, om);
  CHECK(om[0 * 4 + 2] == doctest::Approx(1.0));
}

TEST_CASE("singularity check") {
  auto make = [](const Scalar& e, const Scalar& T, const Scalar& B) {
    return BracketStructure::duval_horvathy(ThetaMatrix::planar(T), e, Polynomial::constant(2, B));
  };
  const std::vector<Scalar> origin{q(0), q(0)};
  auto r = singularity_check(make(q(1), q(1), q(1)), origin);
  CHECK(r.d == q(0));
  CHECK(r.singular);
  r = singularity_check(make(q(1), q(0), q(7)), origin);
  CHECK(r.d == q(1));
  CHECK_FALSE(r.singular);
  r = singularity_check(make(q(1), q(1, 2), q(1)), origin);
  CHECK(r.d == q(1, 2));
  CHECK_THROWS_AS(singularity_check(BracketStructure::canonical(ThetaMatrix::zero(2)), origin), InvalidArgument);
  CHECK_THROWS_AS(require_nonsingular(make(q(1), q(1), q(1)), origin), SingularError);
}

}  // TEST_SUITE
