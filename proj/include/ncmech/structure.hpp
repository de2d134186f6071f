#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ncmech/matrix.hpp"
#include "ncmech/polynomial.hpp"
#include "ncmech/theta.hpp"

namespace ncmech {

enum class StructureKind { deriglazov_canonical, duval_horvathy };

std::string_view to_string(StructureKind kind);
StructureKind parse_structure_kind(std::string_view text);

/// Phase point (x^1..x^n, p_1..p_n).
struct PhaseState {
  std::vector<Scalar> x;
  std::vector<Scalar> p;

  std::size_t n() const { return x.size(); }
  /// Concatenated (x, p); throws DimensionError if the halves differ in length.
  std::vector<Scalar> flat() const;
  std::vector<double> flat_double() const;
};

/// Phase-space Poisson structure over 2n variables ordered (x^1..x^n, p_1..p_n).
///
/// deriglazov_canonical: {x^i,x^j} = θ^{ij}, {x^i,p_j} = δ^i_j, {p_i,p_j} = 0.
/// duval_horvathy (n = 2): {x^i,x^j} = θ^{ij} d, {x^i,p_j} = δ^i_j d,
/// {p_i,p_j} = ε_{ij} e B d with d(x) = 1 - e θ B(x) and ε_{12} = 1.
class BracketStructure {
 public:
  static BracketStructure canonical(ThetaMatrix theta);
  /// `theta` is the full 2x2 matrix; θ_scalar is its (1,2) entry.
  static BracketStructure duval_horvathy(ThetaMatrix theta, const Scalar& e, Polynomial B);

  StructureKind kind() const { return kind_; }
  std::size_t n() const { return theta_.n(); }
  ScalarMode mode() const { return theta_.mode(); }
  const ThetaMatrix& theta() const { return theta_; }
  const Scalar& e() const { return e_; }
  const Polynomial& B() const { return B_; }
  const Scalar& theta_scalar() const { return theta_(0, 1); }

  /// d(x) = 1 - eθB(x) over n variables (1 for the canonical structure).
  Polynomial d_factor() const;

  /// True when Ω^{ab} is polynomial (always for canonical, constant B for duval_horvathy).
  bool is_symbolic() const;

  /// Ω^{ab} as polynomials over the 2n phase variables. Throws InvalidArgument
  /// for duval_horvathy with a non-constant B.
  PolynomialMatrix omega() const;

  /// Ω^{ab} at a phase point (only x is read), row-major 2n x 2n.
  void omega_at(std::span<const double> z, std::span<double> out) const;

 private:
  BracketStructure(StructureKind kind, ThetaMatrix theta, Scalar e, Polynomial B);

  StructureKind kind_;
  ThetaMatrix theta_;
  Scalar e_;
  Polynomial B_;
  FloatEvaluator b_eval_;
};

/// {F,G} = Σ ∂_aF Ω^{ab} ∂_bG for F, G over 2n phase variables.
Polynomial phase_bracket(const Polynomial& F, const Polynomial& G, const BracketStructure& s);

struct SingularityReport {
  Scalar d;
  bool singular = false;
};

/// Value of d = 1 - eθB at a configuration point; |d| < 1e-12 is singular.
/// Throws InvalidArgument for a canonical structure.
SingularityReport singularity_check(const BracketStructure& s, std::span<const Scalar> x);

/// Throws SingularError if d vanishes identically or at `x`.
void require_nonsingular(const BracketStructure& s, std::span<const Scalar> x);

}  // namespace ncmech
