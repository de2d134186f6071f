#include "ncmech/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

std::string_view to_string(StructureKind kind) {
  return kind == StructureKind::deriglazov_canonical ? "deriglazov-canonical" : "duval-horvathy";
}

StructureKind parse_structure_kind(std::string_view text) {
  if (text == "deriglazov-canonical") return StructureKind::deriglazov_canonical;
  if (text == "duval-horvathy") return StructureKind::duval_horvathy;
  throw InvalidArgument("unknown structure kind '" + std::string(text) +
                        "' (expected deriglazov-canonical or duval-horvathy)");
}

std::vector<Scalar> PhaseState::flat() const {
  if (x.size() != p.size()) throw DimensionError("PhaseState: x and p have different lengths");
  std::vector<Scalar> z = x;
  z.insert(z.end(), p.begin(), p.end());
  return z;
}

std::vector<double> PhaseState::flat_double() const {
  std::vector<double> z;
  for (const auto& s : flat()) z.push_back(s.to_double());
  return z;
}

BracketStructure::BracketStructure(StructureKind kind, ThetaMatrix theta, Scalar e, Polynomial B)
    : kind_(kind), theta_(std::move(theta)), e_(std::move(e)), B_(std::move(B)) {
  if (kind_ == StructureKind::duval_horvathy) b_eval_ = FloatEvaluator(B_);
}

BracketStructure BracketStructure::canonical(ThetaMatrix theta) {
  const std::size_t n = theta.n();
  const ScalarMode mode = theta.mode();
  return BracketStructure(StructureKind::deriglazov_canonical, std::move(theta), Scalar::zero(mode),
                          Polynomial(n, mode));
}

BracketStructure BracketStructure::duval_horvathy(ThetaMatrix theta, const Scalar& e, Polynomial B) {
  if (theta.n() != 2) throw DimensionError("duval-horvathy structure requires n = 2");
  if (B.nvars() != 2) throw DimensionError("duval-horvathy: B must be a polynomial in 2 variables");
  require_same_mode(theta.mode(), e.mode(), "duval-horvathy structure");
  require_same_mode(theta.mode(), B.mode(), "duval-horvathy structure");
  return BracketStructure(StructureKind::duval_horvathy, std::move(theta), e, std::move(B));
}

Polynomial BracketStructure::d_factor() const {
  const Polynomial one = Polynomial::constant(n(), Scalar::one(mode()));
  if (kind_ == StructureKind::deriglazov_canonical) return one;
  return one - B_ * (e_ * theta_scalar());
}

bool BracketStructure::is_symbolic() const {
  return kind_ == StructureKind::deriglazov_canonical || B_.is_constant();
}

PolynomialMatrix BracketStructure::omega() const {
  const std::size_t n = this->n();
  const std::size_t N = 2 * n;
  const ScalarMode m = mode();
  PolynomialMatrix om(N, N, Polynomial(N, m));
  auto cst = [&](const Scalar& c) { return Polynomial::constant(N, c); };
  if (kind_ == StructureKind::deriglazov_canonical) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) om(i, j) = cst(theta_(i, j));
      om(i, n + i) = cst(Scalar::one(m));
      om(n + i, i) = cst(-Scalar::one(m));
    }
    return om;
  }
  if (!B_.is_constant()) {
    throw InvalidArgument("duval-horvathy brackets are rational for non-constant B; only pointwise evaluation is supported");
  }
  const Scalar d = Scalar::one(m) - e_ * theta_scalar() * B_.constant_term();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) om(i, j) = cst(theta_(i, j) * d);
    om(i, n + i) = cst(d);
    om(n + i, i) = cst(-d);
  }
  const Scalar pp = e_ * B_.constant_term() * d;
  om(n, n + 1) = cst(pp);
  om(n + 1, n) = cst(-pp);
  return om;
}

void BracketStructure::omega_at(std::span<const double> z, std::span<double> out) const {
  const std::size_t n = this->n();
  const std::size_t N = 2 * n;
  if (z.size() != N || out.size() != N * N) throw DimensionError("omega_at: wrong buffer sizes");
  double d = 1.0;
  double pp = 0.0;
  if (kind_ == StructureKind::duval_horvathy) {
    const double b = b_eval_(z.subspan(0, n));
    d = 1.0 - e_.to_double() * theta_scalar().to_double() * b;
    pp = e_.to_double() * b * d;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * N + j] = theta_(i, j).to_double() * d;
    out[i * N + n + i] = d;
    out[(n + i) * N + i] = -d;
  }
  if (kind_ == StructureKind::duval_horvathy) {
    out[n * N + n + 1] = pp;
    out[(n + 1) * N + n] = -pp;
  }
}

Polynomial phase_bracket(const Polynomial& F, const Polynomial& G, const BracketStructure& s) {
  const std::size_t N = 2 * s.n();
  if (F.nvars() != N || G.nvars() != N) {
    throw DimensionError("phase_bracket: operands must have " + std::to_string(N) + " variables, got " +
                         std::to_string(F.nvars()) + " and " + std::to_string(G.nvars()));
  }
  const PolynomialMatrix om = s.omega();
  const auto dF = gradient(F);
  const auto dG = gradient(G);
  Polynomial r(N, F.mode());
  for (std::size_t a = 0; a < N; ++a) {
    if (dF[a].is_zero()) continue;
    for (std::size_t b = 0; b < N; ++b) {
      if (om(a, b).is_zero() || dG[b].is_zero()) continue;
      r += dF[a] * om(a, b) * dG[b];
    }
  }
  return r;
}

SingularityReport singularity_check(const BracketStructure& s, std::span<const Scalar> x) {
  if (s.kind() != StructureKind::duval_horvathy) {
    throw InvalidArgument("singularity_check applies to the duval-horvathy structure only");
  }
  const Scalar d = s.d_factor().eval(x);
  return {d, std::abs(d.to_double()) < 1e-12};
}

void require_nonsingular(const BracketStructure& s, std::span<const Scalar> x) {
  if (s.kind() != StructureKind::duval_horvathy) return;
  const auto rep = singularity_check(s, x);
  if (rep.singular) {
    throw SingularError("duval-horvathy structure is degenerate: d = 1 - e*theta*B = " + rep.d.to_string());
  }
}

}  // namespace ncmech
