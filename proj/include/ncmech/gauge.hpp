#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ncmech/graded.hpp"
#include "ncmech/matrix.hpp"
#include "ncmech/polynomial.hpp"
#include "ncmech/theta.hpp"

namespace ncmech {

/// External potentials A_i(x), φ(x) and charge e over n configuration variables.
struct FieldConfig {
  std::size_t n = 0;
  std::vector<Polynomial> A;
  Polynomial phi{0};
  Scalar e;

  static FieldConfig zero(std::size_t n, const Scalar& e);
  ScalarMode mode() const { return e.mode(); }
  /// Throws DimensionError / ModeError on inconsistent members.
  void validate() const;
  FieldConfig converted(ScalarMode mode) const;
};

/// Truncated generalized gauge transformation x → x + K(x), p → p + J(x).
///
/// `theta` is the matrix used in the recursion J^m = e/(m+1) {J^{m-1}, f};
/// the transformation is canonical for the phase structure {x^i,x^j} =
/// phase_theta() = -theta. J[m] and K[m] hold the parts homogeneous of degree
/// m in θ; K[0] = 0 and K[m]^i = theta^{il} J[m-1]_l.
struct GaugeSeries {
  Polynomial f{0};
  Scalar e;
  ThetaMatrix theta = ThetaMatrix::zero(1);
  unsigned M = 0;
  std::vector<std::vector<Polynomial>> J;
  std::vector<std::vector<Polynomial>> K;

  std::size_t n() const { return theta.n(); }
  ThetaMatrix phase_theta() const { return theta.negated(); }
  /// Σ_m J[m]_i and Σ_m K[m]^i.
  Polynomial J_total(std::size_t i) const;
  Polynomial K_total(std::size_t i) const;
  std::vector<GradedPolynomial> J_graded() const;
  std::vector<GradedPolynomial> K_graded() const;
};

constexpr unsigned default_order = 4;
constexpr unsigned max_order = 10;

/// Series for gauge function f with recursion matrix `theta`. Throws RangeError for M > max_order.
GaugeSeries build_series(const Polynomial& f, const Scalar& e, const ThetaMatrix& theta, unsigned M = default_order);

/// Series canonical for the phase structure θ_phase (recursion matrix -θ_phase).
GaugeSeries build_series_for_phase(const Polynomial& f, const Scalar& e, const ThetaMatrix& theta_phase,
                                   unsigned M = default_order);

/// R^m_{ij} = ∂_j J^m_i - ∂_i J^m_j - Σ_{l<m} {J^{m-1-l}_i, J^l_j}.
PolynomialMatrix residual_mc(const GaugeSeries& s, unsigned m);

bool is_zero(const PolynomialMatrix& m);

/// Order-by-order residuals of the two position/momentum compatibility equations.
///
/// kk[m](i,j) is the θ^m part of θ^{il}∂_lK^j - θ^{jl}∂_lK^i + {K^i,K^j} and
/// kj[m](i,j) that of θ^{il}∂_lJ_j - ∂_jK^i + {K^i,J_j}, for m = 0..M.
struct CompatResidual {
  std::vector<PolynomialMatrix> kk;
  std::vector<PolynomialMatrix> kj;
  bool vanishes() const;
};
CompatResidual residual_compat(const GaugeSeries& s);

/// Transformed potentials with their θ-graded expansions.
struct TransformedFields {
  FieldConfig fields;
  std::vector<GradedPolynomial> A;
  GradedPolynomial phi;
  unsigned sweeps = 0;
};

/// A', φ' with A'(x + K) = A + J/e and φ'(x + K) = φ through order M.
TransformedFields transform_fields(const FieldConfig& fc, const GaugeSeries& s);

/// F_{ij} = ∂_iA_j - ∂_jA_i + e{A_i, A_j} with the configuration bracket of θ.
PolynomialMatrix field_strength(const FieldConfig& fc, const ThetaMatrix& theta);

/// H'(x + K, p + J) - H(x, p) over 2n variables (x, p), graded in θ, with
/// H = ½(p - eA)² + eφ and H' built from transform_fields.
GradedPolynomial invariance_residual(const FieldConfig& fc, const GaugeSeries& s);

/// Planar symmetric-gauge constant field B with gauge function f = Bxy/2:
/// J = (a y, b x) in closed form.
struct ConstantBGauge {
  double e = 0;
  double B = 0;
  double theta = 0;
  double a = 0;
  double b = 0;
  /// Sign σ of the recursion matrix entry θ^{12} = σθ for which (a y, b x) is the series limit.
  int orientation = -1;
};

ConstantBGauge constant_b_closed_form(double e, double B, double theta, int orientation = -1);

/// α + β√r with rational α, β, r.
struct QuadraticSurd {
  Rational alpha;
  Rational beta;
  Rational r;
  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
  friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y);
  double to_double() const;
};

/// Exact a, b for rational e, B, θ (θ ≠ 0).
std::pair<QuadraticSurd, QuadraticSurd> constant_b_exact(const Rational& e, const Rational& B, const Rational& theta);

/// Taylor coefficients a_0..a_K of a(θ), from θa² + (2 - eBθ)a - eB = 0.
std::vector<Rational> closed_form_taylor(const Rational& e, const Rational& B, unsigned K);

/// Picks σ = ±1 such that the θ¹ series term J¹_1/y for f = Bxy/2 with
/// recursion θ^{12} = σθ equals the θ¹ Taylor term of a. Returns 0 if neither or both match.
int resolve_orientation(const Rational& e, const Rational& B, const Rational& theta);

/// Σ_{m≤M} J^m_1 / y for f = Bxy/2 and recursion θ^{12} = σθ (exact).
Rational series_partial_sum_a(const Rational& e, const Rational& B, const Rational& theta, int orientation,
                              unsigned M);

/// Smooth test path t ↦ (x, y, p1, p2) together with its velocity.
struct PhaseCurve {
  std::function<std::array<double, 4>(double)> z;
  std::function<std::array<double, 4>(double)> zdot;
  double t0 = 0;
  double t1 = 1;
};

struct BoundaryReport {
  /// max |δL - dΛ/dt| with Λ = ½eBxy + ½θ(a p2 y - b p1 x).
  double pointwise = 0;
  /// max |∫δL dt - ΔΛ| over sample times (Gauss-Legendre per interval).
  double integrated = 0;
  /// |∮δL dt| when the curve is closed, otherwise nullopt.
  std::optional<double> loop_integral;
  /// max |δL - dΛ_alt/dt| with Λ_alt = ½(a-b)xy + θa p2 y - θb p1 x.
  double alternate_pointwise = 0;
  std::size_t samples = 0;
};

/// Variation of L = p·ẋ + ½ p_i θ^{ij} ṗ_j - H (phase θ^{12} = θ, φ = 0,
/// A = (-By/2, Bx/2)) under x' = (1 - θb)x, y' = (1 + θa)y, p' = p + (ay, bx)
/// with the matching A'. Throws InvalidArgument for fewer than 16 samples.
BoundaryReport boundary_term_check(double e, double B, double theta, const PhaseCurve& curve,
                                   std::size_t samples = 1000);

}  // namespace ncmech
