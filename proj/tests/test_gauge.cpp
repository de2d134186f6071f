#include <doctest.h>

#include <cmath>
#include <random>

#include "ncmech/bracket.hpp"
#include "ncmech/gauge.hpp"
#include "support.hpp"

using namespace ncmech;
using namespace ncmech::testing;

namespace {

Polynomial half_bxy(const Scalar& B) { return Polynomial::monomial(2, B / q(2), {1, 1}); }

FieldConfig symmetric_field(const Scalar& e, const Scalar& B) {
  FieldConfig fc = FieldConfig::zero(2, e);
  fc.A = {Polynomial::monomial(2, -B / q(2), {0, 1}), Polynomial::monomial(2, B / q(2), {1, 0})};
  return fc;
}

void check_series_identities(const GaugeSeries& s) {
  for (unsigned m = 0; m <= s.M; ++m) CHECK(is_zero(residual_mc(s, m)));
  CHECK(residual_compat(s).vanishes());
}

}  // namespace

TEST_SUITE("gauge") {

TEST_CASE("linear gauge function has only a zeroth order") {
  const Polynomial f = var(2, 0) * q(3) - var(2, 1) * q(1, 2);
  const Scalar e = q(2);
  const GaugeSeries s = build_series(f, e, ThetaMatrix::planar(q(1, 7)), 5);
  CHECK(s.J[0][0] == Polynomial::constant(2, q(6)));
  CHECK(s.J[0][1] == Polynomial::constant(2, q(-1)));
  for (unsigned m = 1; m <= 5; ++m) {
    CHECK(s.J[m][0].is_zero());
    CHECK(s.J[m][1].is_zero());
  }
  check_series_identities(s);
}

TEST_CASE("first series term for the planar quadratic gauge function") {
  const Scalar e = q(3, 2), B = q(5), T = q(1, 4);
  const GaugeSeries s = build_series(half_bxy(B), e, ThetaMatrix::planar(T), 3);
  const Scalar c = e * e * T * B * B / q(8);
  CHECK(s.J[1][0] == var(2, 1) * (-c));
  CHECK(s.J[1][1] == var(2, 0) * c);
}

TEST_CASE("series invariants: base case, recursion and position shift") {
  std::mt19937 rng(11);
  const Polynomial f = random_poly(rng, 2, 3);
  const Scalar e = q(2, 3);
  const ThetaMatrix th = ThetaMatrix::planar(q(1, 5));
  const GaugeSeries s = build_series(f, e, th, 4);
  for (std::size_t i = 0; i < 2; ++i) CHECK(s.J[0][i] == f.diff(i) * e);
  for (unsigned m = 1; m <= 4; ++m) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(s.J[m][i] == poisson_bracket_config(s.J[m - 1][i], f, th) * (e / Scalar::from_int(m + 1, e.mode())));
      Polynomial k(2);
      for (std::size_t l = 0; l < 2; ++l) k += s.J[m - 1][l] * th(i, l);
      CHECK(s.K[m][i] == k);
    }
  }
  CHECK(s.K[0][0].is_zero());
  CHECK(s.phase_theta() == th.negated());
}

TEST_CASE("commutative limit") {
  std::mt19937 rng(3);
  const Polynomial f = random_poly(rng, 2, 3);
  const GaugeSeries s = build_series(f, q(1), ThetaMatrix::zero(2), 4);
  for (unsigned m = 1; m <= 4; ++m) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(s.J[m][i].is_zero());
      CHECK(s.K[m][i].is_zero());
    }
  }
  check_series_identities(s);
}

TEST_CASE("order homogeneity under theta scaling") {
  std::mt19937 rng(17);
  const Polynomial f = random_poly(rng, 2, 3);
  const ThetaMatrix th = ThetaMatrix::planar(q(1, 3));
  const GaugeSeries s1 = build_series(f, q(1), th, 4);
  for (long lambda : {2L, 3L}) {
    const GaugeSeries s2 = build_series(f, q(1), th.scaled(q(lambda)), 4);
    Scalar pw = q(1);
    for (unsigned m = 0; m <= 4; ++m) {
      for (std::size_t i = 0; i < 2; ++i) CHECK(s2.J[m][i] == s1.J[m][i] * pw);
      pw *= q(lambda);
    }
  }
}

TEST_CASE("gauge identities vanish for quadratic and random cubic functions") {
  check_series_identities(build_series(half_bxy(q(1)), q(1), ThetaMatrix::planar(q(1, 10)), 4));
  std::mt19937 rng(31);
  for (int t = 0; t < 3; ++t) {
    const Polynomial f = random_poly(rng, 2, 3, 6);
    check_series_identities(build_series(f, q(3, 2), random_theta(rng, 2), 4));
  }
  const Polynomial f3 = random_poly(rng, 3, 3, 6);
  check_series_identities(build_series(f3, q(1), random_theta(rng, 3), 3));
}

TEST_CASE("residual order range") {
  const GaugeSeries s = build_series(half_bxy(q(1)), q(1), ThetaMatrix::planar(q(1)), 2);
  CHECK_THROWS_AS(residual_mc(s, 3), RangeError);
  CHECK_THROWS_AS(build_series(half_bxy(q(1)), q(1), ThetaMatrix::planar(q(1)), 11), RangeError);
}

TEST_CASE("transform_fields in the commutative limit") {
  std::mt19937 rng(8);
  FieldConfig fc = FieldConfig::zero(2, q(2));
  fc.A = {random_poly(rng, 2, 2), random_poly(rng, 2, 2)};
  fc.phi = random_poly(rng, 2, 2);
  const Polynomial f = random_poly(rng, 2, 3);
  const TransformedFields tf = transform_fields(fc, build_series(f, q(2), ThetaMatrix::zero(2), 3));
  CHECK(tf.fields.A[0] == fc.A[0] + f.diff(0));
  CHECK(tf.fields.A[1] == fc.A[1] + f.diff(1));
  CHECK(tf.fields.phi == fc.phi);
}

TEST_CASE("transformed fields satisfy the composition identities through order M") {
  std::mt19937 rng(21);
  FieldConfig fc = FieldConfig::zero(2, q(3, 2));
  fc.A = {random_poly(rng, 2, 2), random_poly(rng, 2, 2)};
  fc.phi = random_poly(rng, 2, 2);
  const GaugeSeries s = build_series(random_poly(rng, 2, 3), fc.e, ThetaMatrix::planar(q(1, 4)), 3);
  const TransformedFields tf = transform_fields(fc, s);
  CHECK(tf.sweeps <= s.M + 1);
  const auto X = shifted_coordinates(2, ScalarMode::exact, s.M, s.K_graded());
  const auto J = s.J_graded();
  for (std::size_t i = 0; i < 2; ++i) {
    const GradedPolynomial lhs = substitute(tf.A[i], X);
    const GradedPolynomial rhs = GradedPolynomial::homogeneous(fc.A[i], 0, s.M) + J[i] * (q(1) / fc.e);
    CHECK((lhs - rhs).vanishes_through(s.M));
  }
  CHECK((substitute(tf.phi, X) - GradedPolynomial::homogeneous(fc.phi, 0, s.M)).vanishes_through(s.M));
}

TEST_CASE("first-order field shifts match the canonical-transformation oracle") {
  std::mt19937 rng(4);
  const Scalar e = q(5, 3);
  FieldConfig fc = FieldConfig::zero(2, e);
  fc.A = {random_poly(rng, 2, 2), random_poly(rng, 2, 2)};
  fc.phi = random_poly(rng, 2, 3);
  const Polynomial f = random_poly(rng, 2, 3);
  const ThetaMatrix phase = ThetaMatrix::planar(q(2, 7));
  const GaugeSeries s = build_series_for_phase(f, e, phase, 2);
  const TransformedFields tf = transform_fields(fc, s);
  // δA^(1) = e{A + ½∂f, f} and δφ^(1) = e{φ, f} in the phase orientation.
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(tf.A[i].part(1) == poisson_bracket_config(fc.A[i] + f.diff(i) * q(1, 2), f, phase) * e);
  }
  CHECK(tf.phi.part(1) == poisson_bracket_config(fc.phi, f, phase) * e);
}

TEST_CASE("field strength") {
  const Scalar e = q(2), B = q(3), T = q(1, 5);
  const FieldConfig fc = symmetric_field(e, B);
  const PolynomialMatrix F = field_strength(fc, ThetaMatrix::planar(T));
  CHECK(F(0, 1) == Polynomial::constant(2, B + e * T * B * B / q(4)));
  CHECK(F(1, 0) == -F(0, 1));
  CHECK(F(0, 0).is_zero());
  const PolynomialMatrix F0 = field_strength(fc, ThetaMatrix::zero(2));
  CHECK(F0(0, 1) == Polynomial::constant(2, B));
  CHECK(is_zero(field_strength(FieldConfig::zero(2, e), ThetaMatrix::planar(T))));
}

TEST_CASE("field strength is invariant through order M") {
  std::mt19937 rng(12);
  const Scalar e = q(1);
  FieldConfig fc = FieldConfig::zero(2, e);
  fc.A = {random_poly(rng, 2, 2), random_poly(rng, 2, 2)};
  const ThetaMatrix phase = ThetaMatrix::planar(q(1, 3));
  const GaugeSeries s = build_series_for_phase(random_poly(rng, 2, 3), e, phase, 3);
  const TransformedFields tf = transform_fields(fc, s);
  const auto X = shifted_coordinates(2, ScalarMode::exact, s.M, s.K_graded());
  auto graded_strength = [&](const std::vector<GradedPolynomial>& A) {
    return A[1].diff(0) - A[0].diff(1) + poisson_bracket_config(A[0], A[1], phase) * e;
  };
  std::vector<GradedPolynomial> A0;
  for (const auto& a : fc.A) A0.push_back(GradedPolynomial::homogeneous(a, 0, s.M));
  const GradedPolynomial lhs = substitute(graded_strength(tf.A), X);
  CHECK((lhs - graded_strength(A0)).vanishes_through(s.M));
}

TEST_CASE("Hamiltonian invariance") {
  const FieldConfig sym = symmetric_field(q(1), q(1));
  const GaugeSeries s = build_series_for_phase(half_bxy(q(1)), q(1), ThetaMatrix::planar(q(1, 10)), 3);
  CHECK(invariance_residual(sym, s).vanishes_through(3));

  std::mt19937 rng(40);
  FieldConfig fc = FieldConfig::zero(2, q(2));
  fc.A = {random_poly(rng, 2, 2), random_poly(rng, 2, 2)};
  fc.phi = random_poly(rng, 2, 3);
  const Polynomial f = random_poly(rng, 2, 3);
  CHECK(invariance_residual(fc, build_series(f, q(2), ThetaMatrix::zero(2), 3)).vanishes_through(3));
  CHECK(invariance_residual(fc, build_series(Polynomial(2), q(2), ThetaMatrix::planar(q(1, 2)), 3)).vanishes_through(3));
  CHECK(invariance_residual(fc, build_series_for_phase(f, q(2), ThetaMatrix::planar(q(1, 3)), 2)).vanishes_through(2));
}

TEST_CASE("constant field closed form") {
  const ConstantBGauge g = constant_b_closed_form(1, 2, 1);
  CHECK(g.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.b == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-15));
  const ConstantBGauge g0 = constant_b_closed_form(1.5, 2, 0);
  CHECK(g0.a == 1.5);
  CHECK(g0.b == 1.5);
  const ConstantBGauge small = constant_b_closed_form(1.5, 2, 1e-9);
  CHECK(small.a == doctest::Approx(1.5).epsilon(1e-8));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  for (int t = 0; t < 50; ++t) {
    const double e = U(rng), B = U(rng), th = U(rng) - 1.05;
    const ConstantBGauge c = constant_b_closed_form(e, B, th);
    CHECK(std::abs(c.a + c.b - e * B) < 1e-14 * std::max(1.0, e * B));
    CHECK(std::abs(c.a - c.b - c.a * c.b * th) < 1e-13);
  }
  CHECK_THROWS_AS(constant_b_closed_form(1, 1, 1, 0), InvalidArgument);
}

TEST_CASE("closed form identities hold exactly") {
  for (const auto& [e, B, th] : {std::tuple{Rational(1), Rational(1), Rational(1, 10)},
                                 std::tuple{Rational(3, 2), Rational(-2), Rational(7, 3)},
                                 std::tuple{Rational(1), Rational(2), Rational(1)}}) {
    const auto [a, b] = constant_b_exact(e, B, th);
    CHECK(a + b == QuadraticSurd{e * B, 0, 0});
    CHECK(a - b == a * b * QuadraticSurd{th, 0, 0});
  }
  const auto [a, b] = constant_b_exact(1, 2, 1);
  CHECK(a.to_double() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("orientation resolution selects the recursion sign") {
  CHECK(resolve_orientation(1, 1, Rational(1, 10)) == -1);
  CHECK(resolve_orientation(Rational(3, 2), Rational(-2), Rational(1, 3)) == -1);
  CHECK(resolve_orientation(1, 1, 0) == 0);
  const auto taylor = closed_form_taylor(1, 1, 3);
  CHECK(taylor[0] == Rational(1, 2));
  CHECK(taylor[1] == Rational(1, 8));
  CHECK(taylor[2] == 0);
}

TEST_CASE("series partial sums approach the series' own closed form") {
  // Σ_m J^m_1 / y = (eB/2)(exp(u) - 1)/u with u = eBθ/2 in the resolved orientation.
  const double u = 0.05;
  const double c = 0.5 * std::expm1(u) / u;
  const double s10 = series_partial_sum_a(1, 1, Rational(1, 10), -1, 10).get_d();
  CHECK(std::abs(s10 - c) < 1e-15);
  const double a = constant_b_closed_form(1, 1, 0.1).a;
  const double s1 = series_partial_sum_a(1, 1, Rational(1, 10), -1, 1).get_d();
  CHECK(std::abs(s1 - a) < 1e-5);
  CHECK(std::abs(s10 - a) > 1e-4);
}

TEST_CASE("boundary term check") {
  PhaseCurve circle;
  circle.z = [](double t) { return std::array<double, 4>{std::cos(t), std::sin(t), 0.3 * std::cos(2 * t), -0.2 * std::sin(t)}; };
  circle.zdot = [](double t) { return std::array<double, 4>{-std::sin(t), std::cos(t), -0.6 * std::sin(2 * t), -0.2 * std::cos(t)}; };
  circle.t1 = 2 * M_PI;
  const BoundaryReport r = boundary_term_check(1, 1, 0.1, circle, 1000);
  CHECK(r.pointwise < 1e-9);
  CHECK(r.integrated < 1e-9);
  REQUIRE(r.loop_integral.has_value());
  CHECK(*r.loop_integral < 1e-9);
  const BoundaryReport r0 = boundary_term_check(1, 1, 0.0, circle, 64);
  CHECK(r0.pointwise < 1e-12);
  CHECK_THROWS_AS(boundary_term_check(1, 1, 0.1, circle, 15), InvalidArgument);
}

}  // TEST_SUITE
