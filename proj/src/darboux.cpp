#include "ncmech/darboux.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

namespace {

Scalar half(ScalarMode mode) { return Scalar::one(mode) / Scalar::from_int(2, mode); }

GradedPolynomial raised(const GradedPolynomial& g) {
  GradedPolynomial r(g.nvars(), g.mode(), g.max_order());
  for (unsigned k = 0; k + 1 <= g.max_order(); ++k) r.add_to_part(k + 1, g.part(k));
  return r;
}

// x^i = q^i - ½θ^{ij}p_j with the θ term one grade up.
std::vector<GradedPolynomial> graded_positions(const ThetaMatrix& theta, std::span<const GradedPolynomial> p,
                                               std::size_t nvars, unsigned max_order) {
  const std::size_t n = theta.n();
  const ScalarMode mode = theta.mode();
  std::vector<GradedPolynomial> x;
  for (std::size_t i = 0; i < n; ++i) {
    GradedPolynomial shift(nvars, mode, max_order);
    for (std::size_t j = 0; j < n; ++j) {
      if (!theta(i, j).is_zero()) shift += p[j] * (theta(i, j) * half(mode));
    }
    x.push_back(GradedPolynomial::homogeneous(Polynomial::variable(nvars, i, mode), 0, max_order) - raised(shift));
  }
  return x;
}

void require_quadratic(const FieldConfig& fc) {
  for (const auto& a : fc.A) {
    if (a.total_degree() > 1) throw InvalidArgument("exact elimination requires a linear vector potential");
  }
  if (fc.phi.total_degree() > 2) throw InvalidArgument("exact elimination requires a quadratic scalar potential");
}

}  // namespace

std::vector<Scalar> to_darboux(const PhaseState& state, const ThetaMatrix& theta) {
  const std::size_t n = theta.n();
  if (state.x.size() != n || state.p.size() != n) throw DimensionError("to_darboux: state and theta dimensions differ");
  const ScalarMode mode = theta.mode();
  std::vector<Scalar> q = state.x;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) q[i] += half(mode) * theta(i, j) * state.p[j];
  }
  return q;
}

std::vector<Polynomial> darboux_map(const ThetaMatrix& theta) {
  const std::size_t n = theta.n();
  const std::size_t N = 2 * n;
  const ScalarMode mode = theta.mode();
  std::vector<Polynomial> q;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial qi = Polynomial::variable(N, i, mode);
    for (std::size_t j = 0; j < n; ++j) qi += Polynomial::variable(N, n + j, mode) * (half(mode) * theta(i, j));
    q.push_back(std::move(qi));
  }
  return q;
}

Polynomial darboux_hamiltonian(const FieldConfig& fc, const ThetaMatrix& theta) {
  fc.validate();
  if (theta.n() != fc.n) throw DimensionError("darboux_hamiltonian: theta and field dimensions differ");
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  std::vector<Polynomial> args;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial xi = Polynomial::variable(N, i, mode);
    for (std::size_t j = 0; j < n; ++j) xi -= Polynomial::variable(N, n + j, mode) * (half(mode) * theta(i, j));
    args.push_back(std::move(xi));
  }
  for (std::size_t i = 0; i < n; ++i) args.push_back(Polynomial::variable(N, n + i, mode));
  return substitute(hamiltonian(fc, StructureKind::deriglazov_canonical), args);
}

std::string_view to_string(EliminationMode mode) {
  return mode == EliminationMode::exact_quadratic ? "exact" : "first-order";
}

EliminationMode parse_elimination_mode(std::string_view text) {
  if (text == "exact") return EliminationMode::exact_quadratic;
  if (text == "first-order") return EliminationMode::perturbative_first_order;
  throw InvalidArgument("unknown elimination mode '" + std::string(text) + "' (expected exact or first-order)");
}

MomentumSolution eliminate_momenta(const FieldConfig& fc, const ThetaMatrix& theta, EliminationMode mode) {
  fc.validate();
  if (theta.n() != fc.n) throw DimensionError("eliminate_momenta: theta and field dimensions differ");
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode smode = fc.mode();
  MomentumSolution sol;
  sol.mode = mode;

  if (mode == EliminationMode::exact_quadratic) {
    require_quadratic(fc);
    const Polynomial Ht = darboux_hamiltonian(fc, theta);
    const std::vector<Scalar> origin(N, Scalar::zero(smode));
    ScalarMatrix W(n, n, Scalar::zero(smode));
    ScalarMatrix U(n, n, Scalar::zero(smode));
    std::vector<Scalar> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Polynomial dp = Ht.diff(n + i);
      for (std::size_t j = 0; j < n; ++j) {
        W(i, j) = dp.diff(n + j).eval(origin);
        U(i, j) = dp.diff(j).eval(origin);
      }
      u[i] = dp.eval(origin);
    }
    const ScalarMatrix Winv = inverse(W);
    // Over (q, q̇): p = W⁻¹(q̇ - U q - u).
    std::vector<Polynomial> rhs;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial r = Polynomial::variable(N, n + i, smode) - Polynomial::constant(N, u[i]);
      for (std::size_t j = 0; j < n; ++j) r -= Polynomial::variable(N, j, smode) * U(i, j);
      rhs.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial pi(N, smode);
      for (std::size_t j = 0; j < n; ++j) pi += rhs[j] * Winv(i, j);
      sol.p_of_qv.push_back(std::move(pi));
    }
    return sol;
  }

  // p ← q̇ + eA(x) - ½θ∇_x H(x, p), x = q - ½θp, kept through grade 1.
  const unsigned top = 1;
  std::vector<GradedPolynomial> p;
  for (std::size_t i = 0; i < n; ++i) {
    p.push_back(GradedPolynomial::homogeneous(Polynomial::variable(N, n + i, smode), 0, top));
  }
  const Polynomial H = hamiltonian(fc, StructureKind::deriglazov_canonical);
  std::vector<Polynomial> dHdx;
  for (std::size_t k = 0; k < n; ++k) dHdx.push_back(H.diff(k));
  for (unsigned sweep = 0; sweep <= top + 1; ++sweep) {
    const auto x = graded_positions(theta, p, N, top);
    std::vector<GradedPolynomial> args = x;
    args.insert(args.end(), p.begin(), p.end());
    std::vector<GradedPolynomial> grad;
    for (std::size_t k = 0; k < n; ++k) grad.push_back(substitute(dHdx[k], args));
    std::vector<GradedPolynomial> next;
    for (std::size_t i = 0; i < n; ++i) {
      GradedPolynomial pi = GradedPolynomial::homogeneous(Polynomial::variable(N, n + i, smode), 0, top) +
                            substitute(fc.A[i], x) * fc.e;
      GradedPolynomial corr(N, smode, top);
      for (std::size_t k = 0; k < n; ++k) {
        if (!theta(i, k).is_zero()) corr += grad[k] * (theta(i, k) * half(smode));
      }
      next.push_back(pi - raised(corr));
    }
    p = std::move(next);
  }
  sol.graded = p;
  for (const auto& g : p) sol.p_of_qv.push_back(g.total());
  return sol;
}

std::vector<GradedPolynomial> elimination_residual(const FieldConfig& fc, const ThetaMatrix& theta,
                                                   const MomentumSolution& sol) {
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  std::vector<GradedPolynomial> out;
  if (sol.mode == EliminationMode::exact_quadratic) {
    const Polynomial Ht = darboux_hamiltonian(fc, theta);
    std::vector<Polynomial> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(Polynomial::variable(N, i, mode));
    args.insert(args.end(), sol.p_of_qv.begin(), sol.p_of_qv.end());
    for (std::size_t i = 0; i < n; ++i) {
      const Polynomial r = substitute(Ht.diff(n + i), args) - Polynomial::variable(N, n + i, mode);
      out.push_back(GradedPolynomial::homogeneous(r, 0, 0));
    }
    return out;
  }
  // q̇_i = π_i + ½θ^{ik}∂_kH(x, p) with x = q - ½θp, graded.
  const unsigned top = sol.graded.front().max_order();
  const auto x = graded_positions(theta, sol.graded, N, top);
  std::vector<GradedPolynomial> args = x;
  args.insert(args.end(), sol.graded.begin(), sol.graded.end());
  const Polynomial H = hamiltonian(fc, StructureKind::deriglazov_canonical);
  for (std::size_t i = 0; i < n; ++i) {
    GradedPolynomial r = substitute(H.diff(n + i), args);
    GradedPolynomial corr(N, mode, top);
    for (std::size_t k = 0; k < n; ++k) {
      if (!theta(i, k).is_zero()) corr += substitute(H.diff(k), args) * (theta(i, k) * half(mode));
    }
    r += raised(corr);
    r -= GradedPolynomial::homogeneous(Polynomial::variable(N, n + i, mode), 0, top);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Polynomial> first_order_momenta_formula(const FieldConfig& fc, const ThetaMatrix& theta) {
  fc.validate();
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode mode = fc.mode();
  const Scalar& e = fc.e;
  const Scalar h = half(mode);
  std::vector<Polynomial> A, phi_d;
  std::vector<std::vector<Polynomial>> dA(n);  // dA[l][k] = ∂_l A_k
  for (std::size_t k = 0; k < n; ++k) A.push_back(fc.A[k].embedded(N));
  for (std::size_t l = 0; l < n; ++l) {
    phi_d.push_back(fc.phi.diff(l).embedded(N));
    for (std::size_t k = 0; k < n; ++k) dA[l].push_back(fc.A[k].diff(l).embedded(N));
  }
  auto v = [&](std::size_t k) { return Polynomial::variable(N, n + k, mode); };
  std::vector<Polynomial> p;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial pi = v(i) + A[i] * e;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!theta(j, k).is_zero()) pi -= dA[j][i] * (v(k) + A[k] * e) * (h * e * theta(j, k));
      }
    }
    for (std::size_t l = 0; l < n; ++l) {
      if (theta(i, l).is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k) pi += dA[l][k] * v(k) * (h * e * theta(i, l));
      pi -= phi_d[l] * (h * e * theta(i, l));
    }
    p.push_back(std::move(pi));
  }
  return p;
}

LagrangianModel build_lagrangian(const FieldConfig& fc, const ThetaMatrix& theta, EliminationMode mode) {
  const MomentumSolution sol = eliminate_momenta(fc, theta, mode);
  const std::size_t n = fc.n;
  const std::size_t N = 2 * n;
  const ScalarMode smode = fc.mode();
  LagrangianModel model;
  model.n = n;
  model.exactness = mode;
  if (mode == EliminationMode::exact_quadratic) {
    const Polynomial Ht = darboux_hamiltonian(fc, theta);
    std::vector<Polynomial> args;
    for (std::size_t i = 0; i < n; ++i) args.push_back(Polynomial::variable(N, i, smode));
    args.insert(args.end(), sol.p_of_qv.begin(), sol.p_of_qv.end());
    Polynomial L = -substitute(Ht, args);
    for (std::size_t i = 0; i < n; ++i) L += sol.p_of_qv[i] * Polynomial::variable(N, n + i, smode);
    model.L = std::move(L);
    if (auto kc = detect_kappa_case(fc, theta)) model.kappa = kappa_value(fc.e, kc->B, theta(0, 1), kc->omega2);
  } else {
    const unsigned top = 1;
    const auto x = graded_positions(theta, sol.graded, N, top);
    std::vector<GradedPolynomial> args = x;
    args.insert(args.end(), sol.graded.begin(), sol.graded.end());
    GradedPolynomial L = -substitute(hamiltonian(fc, StructureKind::deriglazov_canonical), args);
    for (std::size_t i = 0; i < n; ++i) {
      L += sol.graded[i] * GradedPolynomial::homogeneous(Polynomial::variable(N, n + i, smode), 0, top);
    }
    model.L = L.total();
  }
  model.E = energy(model);
  return model;
}

Polynomial energy(const LagrangianModel& model) {
  const std::size_t n = model.n;
  const std::size_t N = 2 * n;
  Polynomial E = -model.L;
  for (std::size_t i = 0; i < n; ++i) E += Polynomial::variable(N, n + i, model.L.mode()) * model.L.diff(n + i);
  return E;
}

EquationsOfMotion euler_lagrange_rhs(const LagrangianModel& model) {
  const std::size_t n = model.n;
  const std::size_t N = 2 * n;
  if (model.L.nvars() != N) throw DimensionError("euler_lagrange_rhs: L is not over (q, q̇)");
  std::vector<Polynomial> W, Nm, dLdq;
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial dv = model.L.diff(n + i);
    for (std::size_t j = 0; j < n; ++j) {
      W.push_back(dv.diff(n + j));
      Nm.push_back(dv.diff(j));
    }
    dLdq.push_back(model.L.diff(i));
  }
  struct Fields {
    std::vector<FloatEvaluator> W, N, dLdq;
  };
  auto f = std::make_shared<Fields>();
  for (const auto& p : W) f->W.emplace_back(p);
  for (const auto& p : Nm) f->N.emplace_back(p);
  for (const auto& p : dLdq) f->dLdq.emplace_back(p);

  EquationsOfMotion eom;
  eom.kind = EomKind::second_order_config;
  eom.n = n;
  eom.rhs = [f, n](std::span<const double> s, std::span<double> out) {
    std::vector<double> w(n * n), rhs(n);
    for (std::size_t k = 0; k < n * n; ++k) w[k] = f->W[k](s);
    for (std::size_t i = 0; i < n; ++i) {
      double r = f->dLdq[i](s);
      for (std::size_t j = 0; j < n; ++j) r -= f->N[i * n + j](s) * s[n + j];
      rhs[i] = r;
    }
    const std::vector<double> w0 = w;
    if (!solve_in_place(w, rhs, n, 1e-14)) {
      throw SingularError("Lagrangian mass matrix is singular (det W = " + std::to_string(determinant(w0, n)) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = s[n + i];
      out[n + i] = rhs[i];
    }
  };
  return eom;
}

std::optional<KappaCase> detect_kappa_case(const FieldConfig& fc, const ThetaMatrix& theta) {
  if (fc.n != 2 || theta.n() != 2) return std::nullopt;
  const ScalarMode mode = fc.mode();
  const std::vector<Scalar> origin(2, Scalar::zero(mode));
  const Scalar B = (fc.A[1].diff(0) - fc.A[0].diff(1)).eval(origin);
  const auto sym = symmetric_gauge(B);
  if (!(fc.A[0] == sym[0] && fc.A[1] == sym[1])) return std::nullopt;
  const Scalar c = fc.phi.coefficient({2, 0});
  const Polynomial iso = Polynomial::monomial(2, c, {2, 0}) + Polynomial::monomial(2, c, {0, 2});
  if (!(fc.phi == iso)) return std::nullopt;
  return KappaCase{B, c * Scalar::from_int(2, mode)};
}

Scalar kappa_value(const Scalar& e, const Scalar& B, const Scalar& theta, const Scalar& omega2) {
  const ScalarMode mode = e.mode();
  const Scalar t2 = theta * theta;
  const Scalar den = Scalar::from_int(2, mode) + e * e * B * B * t2 / Scalar::from_int(8, mode) + e * B * theta +
                     e * omega2 * t2 / Scalar::from_int(2, mode);
  if (den.is_zero()) throw SingularError("kappa: vanishing denominator");
  return Scalar::one(mode) / den;
}

KappaCoefficients kappa_coefficients(const LagrangianModel& model) {
  const Polynomial& L = model.L;
  KappaCoefficients k{L.coefficient({0, 0, 2, 0}), L.coefficient({1, 0, 0, 1}), L.coefficient({2, 0, 0, 0}), false};
  if (L.nvars() != 4) return k;
  const ScalarMode mode = L.mode();
  Polynomial expected(4, mode);
  expected.add_term({0, 0, 2, 0}, k.kinetic);
  expected.add_term({0, 0, 0, 2}, k.kinetic);
  expected.add_term({1, 0, 0, 1}, k.rotational);
  expected.add_term({0, 1, 1, 0}, -k.rotational);
  expected.add_term({2, 0, 0, 0}, k.potential);
  expected.add_term({0, 2, 0, 0}, k.potential);
  if (mode == ScalarMode::exact) {
    k.structured = L == expected;
  } else {
    k.structured = (L - expected).max_abs_coefficient() <= 1e-12 * std::max(1.0, L.max_abs_coefficient());
  }
  return k;
}

}  // namespace ncmech
