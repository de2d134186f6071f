#include "ncmech/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "ncmech/bracket.hpp"
#include "ncmech/error.hpp"

namespace ncmech {

std::vector<double> EquationsOfMotion::operator()(std::span<const double> state) const {
  std::vector<double> out(dim());
  rhs(state, out);
  return out;
}

Polynomial hamiltonian(const FieldConfig& fc, StructureKind kind) {
  fc.validate();
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  const Scalar half = Scalar::one(mode) / Scalar::from_int(2, mode);
  Polynomial H = fc.phi.embedded(N) * fc.e;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial pi = Polynomial::variable(N, n + i, mode);
    if (kind == StructureKind::deriglazov_canonical) pi -= fc.A[i].embedded(N) * fc.e;
    H += pi * pi * half;
  }
  return H;
}

namespace {

struct PolyField {
  std::vector<FloatEvaluator> comps;

  explicit PolyField(const std::vector<Polynomial>& ps) {
    for (const auto& p : ps) comps.emplace_back(p);
  }
  void operator()(std::span<const double> z, std::span<double> out) const {
    for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i](z);
  }
};

std::string format_state(std::span<const double> z) {
  std::string s = "(";
  char buf[32];
  for (std::size_t i = 0; i < z.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", z[i]);
    s += (i ? ", " : "") + std::string(buf);
  }
  return s + ")";
}

}  // namespace

EquationsOfMotion hamiltonian_flow(const Polynomial& H, const BracketStructure& s) {
  const std::size_t n = s.n();
  const std::size_t N = 2 * n;
  if (H.nvars() != N) {
    throw DimensionError("hamiltonian_flow: H has " + std::to_string(H.nvars()) + " variables, expected " +
                         std::to_string(N));
  }
  EquationsOfMotion eom;
  eom.kind = EomKind::first_order_phase;
  eom.n = n;
  if (s.is_symbolic()) {
    const PolynomialMatrix om = s.omega();
    const auto dH = gradient(H);
    std::vector<Polynomial> rhs(N, Polynomial(N, H.mode()));
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        if (!om(a, b).is_zero() && !dH[b].is_zero()) rhs[a] += om(a, b) * dH[b];
      }
    }
    auto field = std::make_shared<PolyField>(rhs);
    eom.rhs = [field](std::span<const double> z, std::span<double> out) { (*field)(z, out); };
    eom.symbolic_rhs = std::move(rhs);
    return eom;
  }
  auto grad = std::make_shared<PolyField>(gradient(H));
  auto structure = std::make_shared<BracketStructure>(s);
  eom.rhs = [grad, structure, N](std::span<const double> z, std::span<double> out) {
    std::vector<double> g(N), om(N * N);
    (*grad)(z, g);
    structure->omega_at(z, om);
    const double d = om[N * 0 + N / 2];
    if (std::abs(d) < 1e-12) {
      throw SingularError("duval-horvathy structure degenerate (d = " + std::to_string(d) + ") at state " +
                          format_state(z));
    }
    for (std::size_t a = 0; a < N; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < N; ++b) acc += om[a * N + b] * g[b];
      out[a] = acc;
    }
  };
  return eom;
}

EquationsOfMotion hamiltonian_rhs(const FieldConfig& fc, const BracketStructure& s) {
  fc.validate();
  if (fc.n != s.n()) throw DimensionError("hamiltonian_rhs: field and structure dimensions differ");
  if (s.kind() == StructureKind::duval_horvathy && s.B().is_constant()) {
    const std::vector<Scalar> origin(s.n(), Scalar::zero(s.mode()));
    require_nonsingular(s, origin);
  }
  EquationsOfMotion eom = hamiltonian_flow(hamiltonian(fc, s.kind()), s);
  if (s.kind() == StructureKind::deriglazov_canonical) {
    auto A = std::make_shared<PolyField>(fc.A);
    const double e = fc.e.to_double();
    const std::size_t n = fc.n;
    eom.kinetic_momentum = [A, e, n](std::span<const double> z) {
      std::vector<double> a(n);
      (*A)(z.subspan(0, n), a);
      std::vector<double> pi(n);
      for (std::size_t i = 0; i < n; ++i) pi[i] = z[n + i] - e * a[i];
      return pi;
    };
  }
  return eom;
}

// ---------------------------------------------------------------------------
// Second-order reduction

namespace {

ScalarMatrix transpose(const ScalarMatrix& m) {
  ScalarMatrix t(m.cols(), m.rows(), Scalar());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

ScalarMatrix negated(const ScalarMatrix& m) {
  ScalarMatrix r = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = -m(i, j);
  }
  return r;
}

}  // namespace

std::optional<SecondOrderForm> second_order_form(const FieldConfig& fc, const ThetaMatrix& theta) {
  fc.validate();
  if (theta.n() != fc.n) throw DimensionError("second_order_form: theta and field dimensions differ");
  for (const auto& a : fc.A) {
    if (a.total_degree() > 1) return std::nullopt;
  }
  if (fc.phi.total_degree() > 2) return std::nullopt;
  const std::size_t n = fc.n;
  const ScalarMode mode = fc.mode();
  const std::vector<Scalar> origin(n, Scalar::zero(mode));
  const Scalar& e = fc.e;

  ScalarMatrix dA(n, n, Scalar::zero(mode));  // dA(k, j) = ∂_k A_j
  ScalarMatrix S(n, n, Scalar::zero(mode));
  ScalarMatrix th(n, n, Scalar::zero(mode));
  std::vector<Scalar> s(n, Scalar::zero(mode));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      dA(k, j) = fc.A[j].diff(k).eval(origin);
      S(k, j) = fc.phi.diff(k).diff(j).eval(origin);
      th(k, j) = theta(k, j);
    }
    s[k] = fc.phi.diff(k).eval(origin);
  }
  const ScalarMatrix G = identity_matrix(n, mode) + negated(e * (th * dA));
  ScalarMatrix F(n, n, Scalar::zero(mode));
  const PolynomialMatrix Fp = field_strength(fc, theta);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) F(i, j) = Fp(i, j).eval(origin);
  }
  const ScalarMatrix Ginv = inverse(G);
  const ScalarMatrix GFGinv = G * F * Ginv;
  const ScalarMatrix Q = (e * e) * (GFGinv * th) + e * (G * transpose(G));
  SecondOrderForm form;
  form.V = e * GFGinv + e * (th * S);
  form.P = negated(Q * S);
  form.c = negated(Q) * s;
  return form;
}

EquationsOfMotion lorentz_rhs(const FieldConfig& fc, const ThetaMatrix& theta) {
  fc.validate();
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  const BracketStructure s = BracketStructure::canonical(theta);
  const EquationsOfMotion phase = hamiltonian_rhs(fc, s);
  const auto& xdot = *phase.symbolic_rhs;

  // ẋ(x, p) is polynomial; ẍ = Σ_a ∂_a ẋ · ż^a along the phase flow.
  std::vector<Polynomial> jac;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < N; ++a) jac.push_back(xdot[i].diff(a));
  }
  // G^i_j = ∂ẋ^i/∂p_j and ẋ at p = eA(x) give π from v.
  std::vector<Polynomial> Gp;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) Gp.push_back(xdot[i].diff(n + j));
  }
  std::vector<Polynomial> xdot_at_pi0;
  std::vector<Polynomial> shift;
  for (std::size_t i = 0; i < n; ++i) shift.push_back(Polynomial::variable(N, i, mode));
  for (std::size_t i = 0; i < n; ++i) shift.push_back(fc.A[i].embedded(N) * fc.e);
  for (std::size_t i = 0; i < n; ++i) xdot_at_pi0.push_back(substitute(xdot[i], shift));
  std::vector<Polynomial> A = fc.A;

  auto jac_f = std::make_shared<PolyField>(jac);
  auto G_f = std::make_shared<PolyField>(Gp);
  auto x0_f = std::make_shared<PolyField>(xdot_at_pi0);
  auto A_f = std::make_shared<PolyField>(A);
  const double e = fc.e.to_double();
  const RhsFunction phase_rhs = phase.rhs;

  EquationsOfMotion eom;
  eom.kind = EomKind::second_order_config;
  eom.n = n;
  eom.rhs = [=](std::span<const double> state, std::span<double> out) {
    std::vector<double> z(N, 0.0);
    std::copy(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(n), z.begin());
    std::vector<double> G(n * n), base(n), a(n);
    (*G_f)(z, G);
    (*x0_f)(z, base);
    (*A_f)(std::span<const double>(z).subspan(0, n), a);
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = state[n + i] - base[i];
    std::vector<double> Gc = G;
    if (!solve_in_place(Gc, pi, n, 1e-14)) {
      throw SingularError("velocity-momentum matrix G is singular (det G = " + std::to_string(determinant(G, n)) +
                          ") at state " + format_state(state));
    }
    for (std::size_t i = 0; i < n; ++i) z[n + i] = pi[i] + e * a[i];
    std::vector<double> zdot(N), J(n * N);
    phase_rhs(z, zdot);
    (*jac_f)(z, J);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = state[n + i];
      double acc = 0.0;
      for (std::size_t b = 0; b < N; ++b) acc += J[i * N + b] * zdot[b];
      out[n + i] = acc;
    }
  };
  if (auto form = second_order_form(fc, theta)) {
    std::vector<Polynomial> rhs;
    for (std::size_t i = 0; i < n; ++i) rhs.push_back(Polynomial::variable(N, n + i, mode));
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial r = Polynomial::constant(N, form->c[i]);
      for (std::size_t j = 0; j < n; ++j) {
        r += Polynomial::variable(N, n + j, mode) * form->V(i, j);
        r += Polynomial::variable(N, j, mode) * form->P(i, j);
      }
      rhs.push_back(std::move(r));
    }
    eom.symbolic_rhs = std::move(rhs);
  }
  return eom;
}

// ---------------------------------------------------------------------------
// Integration

void IntegratorConfig::validate() const {
  if (method != "rk4") throw InvalidArgument("integrator method '" + method + "' is not supported (rk4 only)");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("integrator dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("integrator t_end must be positive");
}

const std::vector<double>& Trajectory::monitor(const std::string& name) const {
  for (const auto& [key, values] : monitors) {
    if (key == name) return values;
  }
  throw InvalidArgument("unknown monitor '" + name + "'");
}

std::vector<double> Trajectory::component(std::size_t i) const {
  if (i >= 2 * n) throw RangeError("trajectory component " + std::to_string(i) + " out of range");
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s[i]);
  return out;
}

void Trajectory::write_csv(std::ostream& os) const {
  const char* second = kind == EomKind::first_order_phase ? "p" : "v";
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  for (std::size_t i = 0; i < n; ++i) os << ',' << second << i + 1;
  for (const auto& m : monitors) os << ',' << m.first;
  os << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < times.size(); ++k) {
    put(times[k]);
    for (double v : states[k]) {
      os << ',';
      put(v);
    }
    for (const auto& m : monitors) {
      os << ',';
      put(m.second[k]);
    }
    os << '\n';
  }
}

void Trajectory::write_csv(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_csv(os);
  if (!os) throw Error("failed writing '" + path + "'");
}

Trajectory integrate(const EquationsOfMotion& eom, std::span<const double> init, const IntegratorConfig& cfg) {
  cfg.validate();
  const std::size_t N = eom.dim();
  if (init.size() != N) {
    throw DimensionError("integrate: initial state has " + std::to_string(init.size()) + " entries, expected " +
                         std::to_string(N));
  }
  std::vector<FloatEvaluator> mons;
  Trajectory traj;
  traj.kind = eom.kind;
  traj.n = eom.n;
  for (const auto& [name, poly] : cfg.monitors) {
    if (poly.nvars() != N) throw DimensionError("monitor '" + name + "' is not a polynomial over the state variables");
    mons.emplace_back(poly);
    traj.monitors.emplace_back(name, std::vector<double>{});
  }
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double h = cfg.t_end / static_cast<double>(steps);
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);

  std::vector<double> y(init.begin(), init.end());
  std::vector<double> k1(N), k2(N), k3(N), k4(N), tmp(N);
  auto record = [&](std::size_t k) {
    traj.times.push_back(static_cast<double>(k) * h);
    traj.states.push_back(y);
    for (std::size_t m = 0; m < mons.size(); ++m) traj.monitors[m].second.push_back(mons[m](y));
  };
  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    eom.rhs(y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    eom.rhs(tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    eom.rhs(tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    eom.rhs(tmp, k4);
    for (std::size_t i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (double v : y) {
      if (!std::isfinite(v)) throw NumericalError("non-finite state at step " + std::to_string(k));
    }
    record(k);
  }
  return traj;
}

double monitor_drift(const Trajectory& traj, const std::string& name) {
  const auto& values = traj.monitor(name);
  double drift = 0.0;
  for (double v : values) drift = std::max(drift, std::abs(v - values.front()));
  return drift;
}

std::vector<double> derivative_series(const Trajectory& traj, const EquationsOfMotion& eom, std::size_t i) {
  if (i >= eom.dim()) throw RangeError("derivative_series: component out of range");
  std::vector<double> out;
  out.reserve(traj.states.size());
  std::vector<double> d(eom.dim());
  for (const auto& s : traj.states) {
    eom.rhs(s, d);
    out.push_back(d[i]);
  }
  return out;
}

double fit_rotation_frequency(std::span<const double> times, std::span<const double> signal) {
  if (times.size() != signal.size() || times.size() < 3) throw DimensionError("fit_rotation_frequency: bad series");
  std::vector<double> crossings;
  for (std::size_t k = 1; k < signal.size(); ++k) {
    const double a = signal[k - 1];
    const double b = signal[k];
    if (a == 0.0) {
      crossings.push_back(times[k - 1]);
    } else if (a * b < 0.0) {
      crossings.push_back(times[k - 1] + (times[k] - times[k - 1]) * a / (a - b));
    }
  }
  if (crossings.size() < 11) {
    throw InvalidArgument("fit_rotation_frequency: " + std::to_string(crossings.size()) +
                          " zero crossings, at least 5 full periods required");
  }
  const double half_periods = static_cast<double>(crossings.size() - 1);
  return M_PI * half_periods / (crossings.back() - crossings.front());
}

// ---------------------------------------------------------------------------
// Scenarios

namespace {

Scalar require(const ScenarioParams& params, const std::string& key, const std::string& name, ScalarMode mode) {
  auto it = params.find(key);
  if (it == params.end()) throw MissingParameter("scenario '" + name + "' requires parameter '" + key + "'");
  return it->second.converted(mode);
}

Scalar optional_param(const ScenarioParams& params, const std::string& key, const Scalar& fallback, ScalarMode mode) {
  auto it = params.find(key);
  return (it == params.end() ? fallback : it->second).converted(mode);
}

Polynomial isotropic_potential(const Scalar& omega) {
  const ScalarMode mode = omega.mode();
  const Scalar c = omega * omega / Scalar::from_int(2, mode);
  return Polynomial::monomial(2, c, {2, 0}) + Polynomial::monomial(2, c, {0, 2});
}

}  // namespace

std::vector<Polynomial> symmetric_gauge(const Scalar& B) {
  const Scalar half = B / Scalar::from_int(2, B.mode());
  return {Polynomial::monomial(2, -half, {0, 1}), Polynomial::monomial(2, half, {1, 0})};
}

Scalar combined_critical_theta(const Scalar& e, const Scalar& B, const Scalar& omega) {
  const ScalarMode mode = e.mode();
  const Scalar four = Scalar::from_int(4, mode);
  const Scalar den = four * omega * omega + e * B * B;
  if (den.is_zero()) throw SingularError("combined_critical_theta: 4ω² + eB² = 0");
  return -(four * B) / den;
}

std::vector<std::string> scenario_names() { return {"constant-b", "combined", "dh-compare", "harmonic", "saddle"}; }

Scenario scenario(const std::string& name, const ScenarioParams& params, ScalarMode mode) {
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw InvalidArgument("unknown scenario '" + name + "'");
  }
  const Scalar e = require(params, "e", name, mode);
  const Scalar theta = require(params, "theta", name, mode);
  FieldConfig fc = FieldConfig::zero(2, e);
  std::optional<BracketStructure> structure;
  const ThetaMatrix th = ThetaMatrix::planar(theta);

  if (name == "constant-b") {
    fc.A = symmetric_gauge(require(params, "B", name, mode));
  } else if (name == "harmonic") {
    fc.phi = isotropic_potential(require(params, "omega", name, mode));
  } else if (name == "saddle") {
    fc.phi = Polynomial::monomial(2, Scalar::one(mode) / Scalar::from_int(2, mode), {0, 2});
  } else if (name == "combined") {
    fc.A = symmetric_gauge(require(params, "B", name, mode));
    fc.phi = isotropic_potential(require(params, "omega", name, mode));
  } else {
    const Scalar B = require(params, "B", name, mode);
    structure = BracketStructure::duval_horvathy(th, e, Polynomial::constant(2, B));
  }
  if (!structure) structure = BracketStructure::canonical(th);

  PhaseState init;
  init.x = {optional_param(params, "x1", Scalar::one(mode), mode), optional_param(params, "x2", Scalar::zero(mode), mode)};
  init.p = {optional_param(params, "p1", Scalar::zero(mode), mode), optional_param(params, "p2", Scalar::one(mode), mode)};

  IntegratorConfig ic;
  ic.dt = optional_param(params, "dt", Scalar::real(1e-3), ScalarMode::floating).to_double();
  ic.t_end = optional_param(params, "t_end", Scalar::real(10.0), ScalarMode::floating).to_double();
  const Polynomial H = hamiltonian(fc, structure->kind());
  ic.monitors.emplace_back("H", H);
  if (structure->kind() == StructureKind::deriglazov_canonical) {
    const EquationsOfMotion eom = hamiltonian_rhs(fc, *structure);
    Polynomial speed2(4, mode);
    for (std::size_t i = 0; i < 2; ++i) speed2 += (*eom.symbolic_rhs)[i] * (*eom.symbolic_rhs)[i];
    ic.monitors.emplace_back("speed2", speed2);
  }
  return Scenario{name, std::move(fc), std::move(*structure), std::move(ic), std::move(init)};
}

}  // namespace ncmech
