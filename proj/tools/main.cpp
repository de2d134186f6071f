#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncmech/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative particle mechanics: gauge series, dynamics and Darboux reduction"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir = "out";
  std::string mode;
  std::optional<unsigned> order;
  std::string preset;

  const std::map<std::string, std::string> help{
      {"simulate", "Integrate a scenario and write a trajectory CSV"},
      {"gauge-verify", "Check the gauge series identities and Hamiltonian invariance"},
      {"series-dump", "Write the per-order gauge series J and K"},
      {"darboux-compare", "Compare the phase flow with the Darboux and Lagrangian flows"},
      {"strength", "Write the deformed field strength matrix"},
  };
  for (const auto& name : ncmech::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : "");
    sub->add_option("--config", configs, "Scenario JSON file (repeatable for batches)");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--mode", mode, "Scalar mode")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--order", order, "Gauge series truncation order M")->check(CLI::Range(0u, ncmech::max_order));
    sub->add_option("--preset", preset, "Preset scenario name")->check(CLI::IsMember(ncmech::scenario_names()));
  }
  CLI11_PARSE(app, argc, argv);

  const std::string subcommand = app.get_subcommands().front()->get_name();
  ncmech::ParseOverrides overrides;
  if (!mode.empty()) overrides.mode = ncmech::parse_scalar_mode(mode);
  overrides.order = order;
  if (!preset.empty()) overrides.preset = preset;

  std::vector<ncmech::ScenarioConfig> scenarios;
  try {
    if (configs.empty()) {
      if (preset.empty()) {
        std::cerr << "error: give --config or --preset\n";
        return 2;
      }
      scenarios.push_back(ncmech::preset_scenario(preset, overrides));
    }
    for (const auto& path : configs) scenarios.push_back(ncmech::parse_scenario(path, overrides));
  } catch (const ncmech::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ncmech::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return ncmech::run_command(subcommand, scenarios, out_dir, std::cout);
}
