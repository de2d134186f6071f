#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ncmech/darboux.hpp"
#include "ncmech/dynamics.hpp"
#include "ncmech/gauge.hpp"
#include "ncmech/structure.hpp"

namespace ncmech {

/// Malformed JSON; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed JSON that violates the scenario schema; `field` is a dotted path.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OutputsConfig {
  std::optional<std::string> trajectory;
  std::optional<std::string> report;
};

/// A validated scenario file.
struct ScenarioConfig {
  std::string name = "scenario";
  ScalarMode mode = ScalarMode::exact;
  std::optional<std::string> preset;
  BracketStructure structure = BracketStructure::canonical(ThetaMatrix::zero(2));
  FieldConfig fields = FieldConfig::zero(2, Scalar::one(ScalarMode::exact));
  std::optional<Polynomial> gauge_f;
  unsigned order = default_order;
  IntegratorConfig integrator;
  /// "hamiltonian" integrates (x, p); "lorentz" integrates (x, v).
  std::string form = "hamiltonian";
  PhaseState init;
  std::optional<std::vector<Scalar>> init_v;
  OutputsConfig outputs;

  std::size_t n() const { return structure.n(); }
};

/// Command-line overrides applied while parsing.
struct ParseOverrides {
  std::optional<ScalarMode> mode;
  std::optional<unsigned> order;
  std::optional<std::string> preset;
};

ScenarioConfig parse_scenario_text(const std::string& text, const ParseOverrides& overrides = {});
ScenarioConfig parse_scenario(const std::string& path, const ParseOverrides& overrides = {});
/// Scenario from a preset name alone (default parameters).
ScenarioConfig preset_scenario(const std::string& preset, const ParseOverrides& overrides = {});

struct RunResult {
  bool ok = true;
  std::vector<std::string> files;
  nlohmann::json report;
};

RunResult run_simulate(const ScenarioConfig& sc, const std::string& out_dir);
RunResult run_gauge_verify(const ScenarioConfig& sc, const std::string& out_dir);
RunResult run_series_dump(const ScenarioConfig& sc, const std::string& out_dir);
RunResult run_darboux_compare(const ScenarioConfig& sc, const std::string& out_dir);
RunResult run_strength(const ScenarioConfig& sc, const std::string& out_dir);

std::vector<std::string> subcommands();

/// Dispatches `subcommand` over every scenario concurrently; returns the exit status.
int run_command(const std::string& subcommand, const std::vector<ScenarioConfig>& scenarios,
                const std::string& out_dir, std::ostream& log);

/// Series in the exchange format: one record per θ-order with J^m and θJ^m.
nlohmann::json series_to_json(const GaugeSeries& s);

/// Writes `j` pretty-printed (2 spaces, sorted keys, trailing newline).
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace ncmech
