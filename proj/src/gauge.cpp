#include "ncmech/gauge.hpp"

#include <cmath>
#include <string>

#include "ncmech/bracket.hpp"
#include "ncmech/error.hpp"

namespace ncmech {

namespace {

GradedPolynomial embed(const GradedPolynomial& g, std::size_t nvars, std::size_t offset = 0) {
  GradedPolynomial r(nvars, g.mode(), g.max_order());
  for (unsigned k = 0; k <= g.max_order(); ++k) r.add_to_part(k, g.part(k).embedded(nvars, offset));
  return r;
}

// Multiplies by one explicit factor of θ: the grade goes up by one.
GradedPolynomial raised(const GradedPolynomial& g) {
  GradedPolynomial r(g.nvars(), g.mode(), g.max_order());
  for (unsigned k = 0; k + 1 <= g.max_order(); ++k) r.add_to_part(k + 1, g.part(k));
  return r;
}

// Σ_l θ^{il} ∂_l G, one grade higher.
GradedPolynomial theta_derivative(const ThetaMatrix& theta, std::size_t i, const GradedPolynomial& G) {
  GradedPolynomial acc(G.nvars(), G.mode(), G.max_order());
  for (std::size_t l = 0; l < theta.n(); ++l) {
    if (theta(i, l).is_zero()) continue;
    acc += G.diff(l) * theta(i, l);
  }
  return raised(acc);
}

PolynomialMatrix zero_matrix(std::size_t n, ScalarMode mode) { return PolynomialMatrix(n, n, Polynomial(n, mode)); }

}  // namespace

FieldConfig FieldConfig::zero(std::size_t n, const Scalar& e) {
  FieldConfig fc;
  fc.n = n;
  fc.A.assign(n, Polynomial(n, e.mode()));
  fc.phi = Polynomial(n, e.mode());
  fc.e = e;
  return fc;
}

void FieldConfig::validate() const {
  if (A.size() != n) {
    throw DimensionError("FieldConfig: A has " + std::to_string(A.size()) + " components, expected " + std::to_string(n));
  }
  for (const auto& a : A) {
    if (a.nvars() != n) throw DimensionError("FieldConfig: A component is not over n variables");
    require_same_mode(a.mode(), e.mode(), "FieldConfig");
  }
  if (phi.nvars() != n) throw DimensionError("FieldConfig: phi is not over n variables");
  require_same_mode(phi.mode(), e.mode(), "FieldConfig");
}

FieldConfig FieldConfig::converted(ScalarMode mode) const {
  FieldConfig fc;
  fc.n = n;
  for (const auto& a : A) fc.A.push_back(a.converted(mode));
  fc.phi = phi.converted(mode);
  fc.e = e.converted(mode);
  return fc;
}

Polynomial GaugeSeries::J_total(std::size_t i) const {
  Polynomial sum(n(), f.mode());
  for (const auto& row : J) sum += row.at(i);
  return sum;
}

Polynomial GaugeSeries::K_total(std::size_t i) const {
  Polynomial sum(n(), f.mode());
  for (const auto& row : K) sum += row.at(i);
  return sum;
}

std::vector<GradedPolynomial> GaugeSeries::J_graded() const {
  std::vector<GradedPolynomial> out(n(), GradedPolynomial(n(), f.mode(), M));
  for (unsigned m = 0; m <= M; ++m) {
    for (std::size_t i = 0; i < n(); ++i) out[i].add_to_part(m, J[m][i]);
  }
  return out;
}

std::vector<GradedPolynomial> GaugeSeries::K_graded() const {
  std::vector<GradedPolynomial> out(n(), GradedPolynomial(n(), f.mode(), M));
  for (unsigned m = 0; m <= M; ++m) {
    for (std::size_t i = 0; i < n(); ++i) out[i].add_to_part(m, K[m][i]);
  }
  return out;
}

GaugeSeries build_series(const Polynomial& f, const Scalar& e, const ThetaMatrix& theta, unsigned M) {
  if (M > max_order) {
    throw RangeError("truncation order " + std::to_string(M) + " outside 0.." + std::to_string(max_order));
  }
  const std::size_t n = theta.n();
  if (f.nvars() != n) {
    throw DimensionError("build_series: f has " + std::to_string(f.nvars()) + " variables, theta is " +
                         std::to_string(n) + "x" + std::to_string(n));
  }
  require_same_mode(f.mode(), e.mode(), "build_series");
  require_same_mode(f.mode(), theta.mode(), "build_series");
  const ScalarMode mode = f.mode();
  GaugeSeries s;
  s.f = f;
  s.e = e;
  s.theta = theta;
  s.M = M;
  s.J.assign(M + 1, std::vector<Polynomial>(n, Polynomial(n, mode)));
  s.K.assign(M + 1, std::vector<Polynomial>(n, Polynomial(n, mode)));
  for (std::size_t i = 0; i < n; ++i) s.J[0][i] = f.diff(i) * e;
  for (unsigned m = 1; m <= M; ++m) {
    const Scalar c = e / Scalar::from_int(m + 1, mode);
    for (std::size_t i = 0; i < n; ++i) s.J[m][i] = poisson_bracket_config(s.J[m - 1][i], f, theta) * c;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (!theta(i, l).is_zero()) s.K[m][i] += s.J[m - 1][l] * theta(i, l);
      }
    }
  }
  return s;
}

GaugeSeries build_series_for_phase(const Polynomial& f, const Scalar& e, const ThetaMatrix& theta_phase, unsigned M) {
  return build_series(f, e, theta_phase.negated(), M);
}

PolynomialMatrix residual_mc(const GaugeSeries& s, unsigned m) {
  if (m > s.M) throw RangeError("residual_mc: order " + std::to_string(m) + " above M = " + std::to_string(s.M));
  const std::size_t n = s.n();
  PolynomialMatrix R = zero_matrix(n, s.f.mode());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial r = s.J[m][i].diff(j) - s.J[m][j].diff(i);
      for (unsigned l = 0; l < m; ++l) r -= poisson_bracket_config(s.J[m - 1 - l][i], s.J[l][j], s.theta);
      R(i, j) = std::move(r);
    }
  }
  return R;
}

bool is_zero(const PolynomialMatrix& m) {
  for (const auto& p : m.data()) {
    if (!p.is_zero()) return false;
  }
  return true;
}

bool CompatResidual::vanishes() const {
  for (const auto& m : kk) {
    if (!is_zero(m)) return false;
  }
  for (const auto& m : kj) {
    if (!is_zero(m)) return false;
  }
  return true;
}

CompatResidual residual_compat(const GaugeSeries& s) {
  const std::size_t n = s.n();
  const ScalarMode mode = s.f.mode();
  const auto K = s.K_graded();
  const auto J = s.J_graded();
  CompatResidual out;
  out.kk.assign(s.M + 1, zero_matrix(n, mode));
  out.kj.assign(s.M + 1, zero_matrix(n, mode));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const GradedPolynomial kk = theta_derivative(s.theta, i, K[j]) - theta_derivative(s.theta, j, K[i]) +
                                  poisson_bracket_config(K[i], K[j], s.theta);
      const GradedPolynomial kj =
          theta_derivative(s.theta, i, J[j]) - K[i].diff(j) + poisson_bracket_config(K[i], J[j], s.theta);
      for (unsigned m = 0; m <= s.M; ++m) {
        out.kk[m](i, j) = kk.part(m);
        out.kj[m](i, j) = kj.part(m);
      }
    }
  }
  return out;
}

TransformedFields transform_fields(const FieldConfig& fc, const GaugeSeries& s) {
  fc.validate();
  if (fc.n != s.n()) throw DimensionError("transform_fields: field and series dimensions differ");
  require_same_mode(fc.mode(), s.f.mode(), "transform_fields");
  if (fc.e.is_zero()) throw InvalidArgument("transform_fields: charge e must be non-zero");
  const std::size_t n = fc.n;
  const ScalarMode mode = fc.mode();
  const unsigned M = s.M;
  const Scalar inv_e = Scalar::one(mode) / fc.e;

  const auto J = s.J_graded();
  const auto X = shifted_coordinates(n, mode, M, s.K_graded());

  std::vector<GradedPolynomial> target;
  for (std::size_t i = 0; i < n; ++i) target.push_back(GradedPolynomial::homogeneous(fc.A[i], 0, M) + J[i] * inv_e);
  const GradedPolynomial phi_target = GradedPolynomial::homogeneous(fc.phi, 0, M);

  TransformedFields out{fc, target, phi_target, 0};
  // Each sweep removes the lowest surviving grade of the composition error.
  for (unsigned sweep = 1; sweep <= M + 1; ++sweep) {
    out.sweeps = sweep;
    bool done = true;
    for (std::size_t i = 0; i < n; ++i) {
      GradedPolynomial err = substitute(out.A[i], X) - target[i];
      if (!err.vanishes_through(M)) {
        done = false;
        out.A[i] -= err;
      }
    }
    GradedPolynomial err = substitute(out.phi, X) - phi_target;
    if (!err.vanishes_through(M)) {
      done = false;
      out.phi -= err;
    }
    if (done) break;
    if (sweep == M + 1 && mode == ScalarMode::exact) {
      throw Error("transform_fields: composition error did not vanish through order " + std::to_string(M) +
                  " after " + std::to_string(sweep) + " sweeps");
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.fields.A[i] = out.A[i].total();
  out.fields.phi = out.phi.total();
  return out;
}

PolynomialMatrix field_strength(const FieldConfig& fc, const ThetaMatrix& theta) {
  fc.validate();
  if (theta.n() != fc.n) throw DimensionError("field_strength: theta and field dimensions differ");
  const std::size_t n = fc.n;
  PolynomialMatrix F = zero_matrix(n, fc.mode());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      F(i, j) = fc.A[j].diff(i) - fc.A[i].diff(j) + poisson_bracket_config(fc.A[i], fc.A[j], theta) * fc.e;
    }
  }
  return F;
}

GradedPolynomial invariance_residual(const FieldConfig& fc, const GaugeSeries& s) {
  const TransformedFields tf = transform_fields(fc, s);
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  const unsigned M = s.M;
  const Scalar half = Scalar::one(mode) / Scalar::from_int(2, mode);

  const auto K = s.K_graded();
  const auto J = s.J_graded();
  std::vector<GradedPolynomial> X;
  for (std::size_t i = 0; i < n; ++i) {
    X.push_back(GradedPolynomial::homogeneous(Polynomial::variable(N, i, mode), 0, M) + embed(K[i], N));
  }

  GradedPolynomial H(N, mode, M);
  GradedPolynomial Hp(N, mode, M);
  for (std::size_t i = 0; i < n; ++i) {
    const GradedPolynomial p = GradedPolynomial::homogeneous(Polynomial::variable(N, n + i, mode), 0, M);
    const GradedPolynomial pi = p - GradedPolynomial::homogeneous(fc.A[i].embedded(N), 0, M) * fc.e;
    const GradedPolynomial pi_new = p + embed(J[i], N) - substitute(tf.A[i], X) * fc.e;
    H += pi * pi * half;
    Hp += pi_new * pi_new * half;
  }
  H += GradedPolynomial::homogeneous(fc.phi.embedded(N), 0, M) * fc.e;
  Hp += substitute(tf.phi, X) * fc.e;
  return Hp - H;
}

// ---------------------------------------------------------------------------
// Constant field closed form

ConstantBGauge constant_b_closed_form(double e, double B, double theta, int orientation) {
  if (orientation != 1 && orientation != -1) throw InvalidArgument("orientation must be +1 or -1");
  ConstantBGauge g{e, B, theta, 0, 0, orientation};
  const double t = -orientation * theta;
  const double eb = e * B;
  if (t == 0.0) {
    g.a = g.b = eb / 2;
    return g;
  }
  const double s = std::sqrt(eb * eb * t * t + 4.0);
  // (2 - s)/(2t) rewritten without the cancellation near t = 0.
  const double shift = eb * eb * t / (2.0 * (s + 2.0));
  g.a = eb / 2 + shift;
  g.b = eb / 2 - shift;
  return g;
}

namespace {

QuadraticSurd normalized(QuadraticSurd s) {
  s.alpha.canonicalize();
  s.beta.canonicalize();
  s.r.canonicalize();
  if (s.r < 0) throw InvalidArgument("QuadraticSurd: negative radicand");
  if (s.beta == 0) {
    s.r = 0;
    return s;
  }
  if (mpz_perfect_square_p(s.r.get_num_mpz_t()) && mpz_perfect_square_p(s.r.get_den_mpz_t())) {
    mpz_class num, den;
    mpz_sqrt(num.get_mpz_t(), s.r.get_num_mpz_t());
    mpz_sqrt(den.get_mpz_t(), s.r.get_den_mpz_t());
    s.alpha += s.beta * Rational(num, den);
    s.beta = 0;
    s.r = 0;
  }
  return s;
}

const Rational& common_radicand(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (x.beta != 0 && y.beta != 0 && x.r != y.r) throw InvalidArgument("QuadraticSurd: different radicands");
  return x.beta != 0 ? x.r : y.r;
}

}  // namespace

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
  return normalized({x.alpha + y.alpha, x.beta + y.beta, common_radicand(x, y)});
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) {
  return normalized({x.alpha - y.alpha, x.beta - y.beta, common_radicand(x, y)});
}

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
  const Rational r = common_radicand(x, y);
  return normalized({x.alpha * y.alpha + x.beta * y.beta * r, x.alpha * y.beta + x.beta * y.alpha, r});
}

bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) {
  const QuadraticSurd a = normalized(x);
  const QuadraticSurd b = normalized(y);
  return a.alpha == b.alpha && a.beta == b.beta && (a.beta == 0 || a.r == b.r);
}

double QuadraticSurd::to_double() const { return alpha.get_d() + beta.get_d() * std::sqrt(r.get_d()); }

std::pair<QuadraticSurd, QuadraticSurd> constant_b_exact(const Rational& e, const Rational& B, const Rational& theta) {
  if (theta == 0) throw InvalidArgument("constant_b_exact: theta must be non-zero");
  const Rational eb = e * B;
  const Rational r = eb * eb * theta * theta + 4;
  const Rational half_eb = eb / 2;
  const Rational inv_t = Rational(1) / theta;
  const Rational half_inv_t = inv_t / 2;
  QuadraticSurd a = normalized({half_eb - inv_t, half_inv_t, r});
  QuadraticSurd b = normalized({half_eb + inv_t, -half_inv_t, r});
  return {a, b};
}

std::vector<Rational> closed_form_taylor(const Rational& e, const Rational& B, unsigned K) {
  const Rational eb = e * B;
  std::vector<Rational> a(K + 1);
  a[0] = eb / 2;
  for (unsigned k = 1; k <= K; ++k) {
    Rational conv = 0;
    for (unsigned i = 0; i <= k - 1; ++i) conv += a[i] * a[k - 1 - i];
    a[k] = (eb * a[k - 1] - conv) / 2;
  }
  return a;
}

namespace {

Polynomial planar_gauge_function(const Rational& B) {
  return Polynomial::monomial(2, Scalar(Rational(B / 2)), {1, 1});
}

Rational y_coefficient(const Polynomial& p) {
  for (const auto& [exps, c] : p.terms()) {
    if (exps != Polynomial::Exponents{0, 1}) {
      throw Error("expected a multiple of y in the planar series, found " + p.to_string());
    }
  }
  return p.coefficient({0, 1}).rational();
}

}  // namespace

Rational series_partial_sum_a(const Rational& e, const Rational& B, const Rational& theta, int orientation, unsigned M) {
  const ThetaMatrix th = ThetaMatrix::planar(Scalar(Rational(orientation * theta)));
  const GaugeSeries s = build_series(planar_gauge_function(B), Scalar(e), th, M);
  Rational sum = 0;
  for (unsigned m = 0; m <= M; ++m) sum += y_coefficient(s.J[m][0]);
  return sum;
}

int resolve_orientation(const Rational& e, const Rational& B, const Rational& theta) {
  const Rational target = closed_form_taylor(e, B, 1)[1] * theta;
  int found = 0;
  int matches = 0;
  for (int sigma : {1, -1}) {
    const ThetaMatrix th = ThetaMatrix::planar(Scalar(Rational(sigma * theta)));
    const GaugeSeries s = build_series(planar_gauge_function(B), Scalar(e), th, 1);
    if (y_coefficient(s.J[1][0]) == target) {
      found = sigma;
      ++matches;
    }
  }
  return matches == 1 ? found : 0;
}

// ---------------------------------------------------------------------------
// Total-derivative check

namespace {

struct PlanarLagrangian {
  double e, B, theta;
  // A = (c1 y, c2 x)
  double c1, c2;

  double operator()(const std::array<double, 4>& z, const std::array<double, 4>& zd) const {
    const double pi1 = z[2] - e * c1 * z[1];
    const double pi2 = z[3] - e * c2 * z[0];
    const double H = 0.5 * (pi1 * pi1 + pi2 * pi2);
    return z[2] * zd[0] + z[3] * zd[1] + 0.5 * theta * (z[2] * zd[3] - z[3] * zd[2]) - H;
  }
};

}  // namespace

BoundaryReport boundary_term_check(double e, double B, double theta, const PhaseCurve& curve, std::size_t samples) {
  if (samples < 16) {
    throw InvalidArgument("boundary_term_check: curve sampled at " + std::to_string(samples) +
                          " points, at least 16 required");
  }
  if (e == 0.0) throw InvalidArgument("boundary_term_check: charge e must be non-zero");
  if (!(curve.t1 > curve.t0)) throw InvalidArgument("boundary_term_check: empty parameter interval");
  const ConstantBGauge g = constant_b_closed_form(e, B, theta);
  const double a = g.a;
  const double b = g.b;
  const double sx = 1.0 - theta * b;
  const double sy = 1.0 + theta * a;
  if (sx == 0.0 || sy == 0.0) throw SingularError("boundary_term_check: degenerate coordinate rescaling");

  const PlanarLagrangian L{e, B, theta, -B / 2, B / 2};
  const PlanarLagrangian Lp{e, B, theta, (2 * a - e * B) / (2 * e * sy), (2 * b + e * B) / (2 * e * sx)};

  auto delta_L = [&](double t) {
    const auto z = curve.z(t);
    const auto zd = curve.zdot(t);
    const std::array<double, 4> w{sx * z[0], sy * z[1], z[2] + a * z[1], z[3] + b * z[0]};
    const std::array<double, 4> wd{sx * zd[0], sy * zd[1], zd[2] + a * zd[1], zd[3] + b * zd[0]};
    return Lp(w, wd) - L(z, zd);
  };
  auto lambda = [&](const std::array<double, 4>& z) {
    return 0.5 * e * B * z[0] * z[1] + 0.5 * theta * (a * z[3] * z[1] - b * z[2] * z[0]);
  };
  auto dlambda = [&](const std::array<double, 4>& z, const std::array<double, 4>& zd) {
    return (0.5 * e * B * z[1] - 0.5 * theta * b * z[2]) * zd[0] + (0.5 * e * B * z[0] + 0.5 * theta * a * z[3]) * zd[1] -
           0.5 * theta * b * z[0] * zd[2] + 0.5 * theta * a * z[1] * zd[3];
  };
  auto dlambda_alt = [&](const std::array<double, 4>& z, const std::array<double, 4>& zd) {
    return (0.5 * (a - b) * z[1] - theta * b * z[2]) * zd[0] + (0.5 * (a - b) * z[0] + theta * a * z[3]) * zd[1] -
           theta * b * z[0] * zd[2] + theta * a * z[1] * zd[3];
  };

  static constexpr double gl_nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                         0.9061798459386640};
  static constexpr double gl_weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

  BoundaryReport rep;
  rep.samples = samples;
  const double h = (curve.t1 - curve.t0) / static_cast<double>(samples - 1);
  const double lambda0 = lambda(curve.z(curve.t0));
  double integral = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = curve.t0 + static_cast<double>(k) * h;
    const auto z = curve.z(t);
    const auto zd = curve.zdot(t);
    const double dl = delta_L(t);
    rep.pointwise = std::max(rep.pointwise, std::abs(dl - dlambda(z, zd)));
    rep.alternate_pointwise = std::max(rep.alternate_pointwise, std::abs(dl - dlambda_alt(z, zd)));
    if (k > 0) {
      const double mid = t - h / 2;
      for (int q = 0; q < 5; ++q) integral += 0.5 * h * gl_weights[q] * delta_L(mid + 0.5 * h * gl_nodes[q]);
      rep.integrated = std::max(rep.integrated, std::abs(integral - (lambda(z) - lambda0)));
    }
  }
  const auto z0 = curve.z(curve.t0);
  const auto z1 = curve.z(curve.t1);
  double gap = 0.0;
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) {
    gap = std::max(gap, std::abs(z1[i] - z0[i]));
    scale = std::max(scale, std::abs(z0[i]));
  }
  if (gap <= 1e-12 * scale) rep.loop_integral = std::abs(integral);
  return rep;
}

}  // namespace ncmech
