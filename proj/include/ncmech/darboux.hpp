#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ncmech/dynamics.hpp"
#include "ncmech/gauge.hpp"
#include "ncmech/graded.hpp"
#include "ncmech/structure.hpp"

namespace ncmech {

/// q^i = x^i + ½θ^{ij}p_j.
std::vector<Scalar> to_darboux(const PhaseState& state, const ThetaMatrix& theta);

/// q^i(x, p) as polynomials over the 2n variables (x, p).
std::vector<Polynomial> darboux_map(const ThetaMatrix& theta);

/// H̃(q, p) = H(q - ½θp, p) with H = ½(p - eA)² + eφ; over (q, p).
Polynomial darboux_hamiltonian(const FieldConfig& fc, const ThetaMatrix& theta);

enum class EliminationMode { exact_quadratic, perturbative_first_order };

std::string_view to_string(EliminationMode mode);
EliminationMode parse_elimination_mode(std::string_view text);

/// Momenta p(q, q̇) solving q̇ = ∂H̃/∂p; polynomials over the 2n variables (q, q̇).
struct MomentumSolution {
  EliminationMode mode = EliminationMode::exact_quadratic;
  std::vector<Polynomial> p_of_qv;
  /// Perturbative mode: grades 0 and 1 of each momentum.
  std::vector<GradedPolynomial> graded;
};

/// Exact mode requires linear A and quadratic φ (throws InvalidArgument
/// otherwise, SingularError for a singular velocity-momentum system).
MomentumSolution eliminate_momenta(const FieldConfig& fc, const ThetaMatrix& theta, EliminationMode mode);

/// ∂H̃/∂p(q, p(q, q̇)) - q̇, graded in θ (perturbative mode) or at grade 0 (exact mode).
std::vector<GradedPolynomial> elimination_residual(const FieldConfig& fc, const ThetaMatrix& theta,
                                                   const MomentumSolution& sol);

/// First-order momenta as written out term by term:
/// p_i = q̇^i + eA_i - ½e∂_jA_i θ^{jk}(q̇^k + eA_k) + ½eθ^{il}∂_lA_k q̇^k - ½eθ^{il}∂_lφ.
std::vector<Polynomial> first_order_momenta_formula(const FieldConfig& fc, const ThetaMatrix& theta);

struct LagrangianModel {
  std::size_t n = 0;
  Polynomial L{0};
  Polynomial E{0};
  EliminationMode exactness = EliminationMode::exact_quadratic;
  std::optional<Scalar> kappa;
};

/// L(q, q̇) = p·q̇ - H̃(q, p) with p from eliminate_momenta; first-order mode keeps grades ≤ 1.
LagrangianModel build_lagrangian(const FieldConfig& fc, const ThetaMatrix& theta, EliminationMode mode);

/// q̇·∂L/∂q̇ - L.
Polynomial energy(const LagrangianModel& model);

/// q̈ = W⁻¹(∂L/∂q - N q̇) with W = ∂²L/∂q̇∂q̇ and N = ∂²L/∂q̇∂q; state (q, q̇).
/// Throws SingularError where W is singular.
EquationsOfMotion euler_lagrange_rhs(const LagrangianModel& model);

/// Planar symmetric-gauge constant B with isotropic φ = ω²(x² + y²)/2.
struct KappaCase {
  Scalar B;
  Scalar omega2;
};

std::optional<KappaCase> detect_kappa_case(const FieldConfig& fc, const ThetaMatrix& theta);

/// κ = (2 + e²B²θ²/8 + eBθ + eω²θ²/2)⁻¹.
Scalar kappa_value(const Scalar& e, const Scalar& B, const Scalar& theta, const Scalar& omega2);

/// Coefficients of L read off as κ_L q̇², c_rot (q_x q̇_y - q_y q̇_x), c_pot q².
struct KappaCoefficients {
  Scalar kinetic;
  Scalar rotational;
  Scalar potential;
  /// True when L has exactly this isotropic structure.
  bool structured = false;
};

KappaCoefficients kappa_coefficients(const LagrangianModel& model);

}  // namespace ncmech
