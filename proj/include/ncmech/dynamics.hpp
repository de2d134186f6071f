#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncmech/gauge.hpp"
#include "ncmech/matrix.hpp"
#include "ncmech/structure.hpp"

namespace ncmech {

enum class EomKind { first_order_phase, second_order_config };

/// Writes d(state)/dt into `out`; both spans have length 2n.
using RhsFunction = std::function<void(std::span<const double> state, std::span<double> out)>;

/// State layout: (x, p) for first-order phase equations, (x, v) for second-order ones.
struct EquationsOfMotion {
  EomKind kind = EomKind::first_order_phase;
  std::size_t n = 0;
  RhsFunction rhs;
  /// Polynomial right-hand side over the 2n state variables, when available.
  std::optional<std::vector<Polynomial>> symbolic_rhs;
  /// (x, p) ↦ π = p - eA(x), when the equations come from a minimally coupled Hamiltonian.
  std::function<std::vector<double>(std::span<const double>)> kinetic_momentum;

  std::size_t dim() const { return 2 * n; }
  std::vector<double> operator()(std::span<const double> state) const;
};

/// ½(p - eA)² + eφ for the canonical structure, ½p² + eφ for duval_horvathy; over (x, p).
Polynomial hamiltonian(const FieldConfig& fc, StructureKind kind);

/// ż^a = Σ_b Ω^{ab} ∂_b H for a Hamiltonian over the 2n phase variables.
EquationsOfMotion hamiltonian_flow(const Polynomial& H, const BracketStructure& s);

/// Phase-space equations generated by the structure and the field Hamiltonian.
/// Throws SingularError for a duval_horvathy structure with d = 0 (constant B).
EquationsOfMotion hamiltonian_rhs(const FieldConfig& fc, const BracketStructure& s);

/// ẍ = V ẋ + P x + c, exact when the fields are.
struct SecondOrderForm {
  ScalarMatrix V;
  ScalarMatrix P;
  std::vector<Scalar> c;
};

/// Exact second-order form for linear A and quadratic φ; nullopt otherwise.
/// Throws SingularError when G = I - eθ∂A is singular.
std::optional<SecondOrderForm> second_order_form(const FieldConfig& fc, const ThetaMatrix& theta);

/// Second-order equations in (x, v) obtained by eliminating π pointwise.
/// Throws SingularError (with the state and det G) where G is singular.
EquationsOfMotion lorentz_rhs(const FieldConfig& fc, const ThetaMatrix& theta);

struct IntegratorConfig {
  std::string method = "rk4";
  double dt = 1e-3;
  double t_end = 10.0;
  std::vector<std::pair<std::string, Polynomial>> monitors;

  /// Throws InvalidArgument unless dt > 0, t_end > 0 and method == "rk4".
  void validate() const;
};

struct Trajectory {
  EomKind kind = EomKind::first_order_phase;
  std::size_t n = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::pair<std::string, std::vector<double>>> monitors;

  const std::vector<double>& monitor(const std::string& name) const;
  /// Column `i` of the state over time.
  std::vector<double> component(std::size_t i) const;
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;
};

/// Classical RK4 with N = ceil(t_end/dt) equal steps of t_end/N.
/// Throws NumericalError when the state becomes non-finite.
Trajectory integrate(const EquationsOfMotion& eom, std::span<const double> init, const IntegratorConfig& cfg);

/// max_k |m(t_k) - m(t_0)|. Throws InvalidArgument for an unknown monitor.
double monitor_drift(const Trajectory& traj, const std::string& name);

/// Time derivative of state component `i` along the trajectory, from the equations.
std::vector<double> derivative_series(const Trajectory& traj, const EquationsOfMotion& eom, std::size_t i);

/// Angular frequency from linearly interpolated zero crossings of `signal`.
/// Throws InvalidArgument with fewer than 5 full periods.
double fit_rotation_frequency(std::span<const double> times, std::span<const double> signal);

/// A named, fully specified run.
struct Scenario {
  std::string name;
  FieldConfig fields;
  BracketStructure structure;
  IntegratorConfig integrator;
  PhaseState init;
};

using ScenarioParams = std::map<std::string, Scalar>;

/// Preset scenarios: constant-b, harmonic, saddle, combined, dh-compare.
///
/// Parameters: e and theta always; B for constant-b, combined, dh-compare;
/// omega for harmonic and combined. Optional: x1, x2, p1, p2, dt, t_end.
/// Throws MissingParameter or InvalidArgument (unknown name).
Scenario scenario(const std::string& name, const ScenarioParams& params, ScalarMode mode = ScalarMode::floating);

std::vector<std::string> scenario_names();

class MissingParameter : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// θ at which the rotational coefficient of the combined field vanishes: -4B/(4ω² + eB²).
Scalar combined_critical_theta(const Scalar& e, const Scalar& B, const Scalar& omega);

/// Symmetric gauge A = (-By/2, Bx/2).
std::vector<Polynomial> symmetric_gauge(const Scalar& B);

}  // namespace ncmech
