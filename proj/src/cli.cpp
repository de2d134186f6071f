#include "ncmech/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "ncmech/exchange.hpp"

namespace ncmech {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Schema helpers

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Scalar scalar_at(const json& j, const std::string& path, ScalarMode mode) {
  try {
    return scalar_from_json(j, mode);
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

Polynomial poly_at(const json& j, const std::string& path, std::size_t n, ScalarMode mode) {
  try {
    return from_exchange(j, n, mode);
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

double double_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

unsigned unsigned_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long>() < 0) throw SchemaError(path, "expected a non-negative integer");
  return static_cast<unsigned>(j.get<long>());
}

std::vector<Scalar> vector_at(const json& j, const std::string& path, std::size_t n, ScalarMode mode) {
  if (!j.is_array()) throw SchemaError(path, "expected a list of " + std::to_string(n) + " scalars");
  if (j.size() != n) {
    throw SchemaError(path, "has " + std::to_string(j.size()) + " entries, expected " + std::to_string(n));
  }
  std::vector<Scalar> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(scalar_at(j[i], index_path(path, i), mode));
  return v;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Polynomial builtin_speed2(const ScenarioConfig& sc) {
  const std::size_t N = 2 * sc.n();
  Polynomial s(N, sc.mode);
  if (sc.form == "lorentz") {
    for (std::size_t i = 0; i < sc.n(); ++i) {
      const Polynomial v = Polynomial::variable(N, sc.n() + i, sc.mode);
      s += v * v;
    }
    return s;
  }
  const EquationsOfMotion eom = hamiltonian_rhs(sc.fields, sc.structure);
  if (!eom.symbolic_rhs) throw SchemaError("integrator.monitors", "speed2 needs polynomial equations of motion");
  for (std::size_t i = 0; i < sc.n(); ++i) s += (*eom.symbolic_rhs)[i] * (*eom.symbolic_rhs)[i];
  return s;
}

ScenarioParams default_params(ScalarMode mode) {
  return {{"e", Scalar::one(mode)},
          {"B", Scalar::one(mode)},
          {"theta", Scalar::parse("1/10", mode)},
          {"omega", Scalar::one(mode)}};
}

void apply_preset(ScenarioConfig& sc, const std::string& preset, const ScenarioParams& params) {
  const Scenario s = scenario(preset, params, sc.mode);
  sc.preset = preset;
  sc.structure = s.structure;
  sc.fields = s.fields;
  sc.integrator = s.integrator;
  sc.init = s.init;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

ScenarioConfig parse_scenario_text(const std::string& text, const ParseOverrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("invalid JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  check_keys(root, "",
             {"name", "preset", "mode", "params", "structure", "fields", "gauge", "integrator", "init", "outputs"});

  ScenarioConfig sc;
  if (root.contains("mode")) {
    try {
      sc.mode = parse_scalar_mode(string_at(root["mode"], "mode"));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError("mode", e.what());
    }
  }
  if (overrides.mode) sc.mode = *overrides.mode;
  const ScalarMode mode = sc.mode;
  sc.fields = FieldConfig::zero(2, Scalar::one(mode));
  sc.structure = BracketStructure::canonical(ThetaMatrix::zero(2, mode));

  std::optional<std::string> preset;
  if (root.contains("preset")) preset = string_at(root["preset"], "preset");
  if (overrides.preset) preset = overrides.preset;
  if (root.contains("name")) sc.name = string_at(root["name"], "name");
  else if (preset) sc.name = *preset;

  ScenarioParams params = default_params(mode);
  if (root.contains("params")) {
    const json& p = root["params"];
    check_keys(p, "params", {"e", "B", "theta", "omega", "x1", "x2", "p1", "p2", "dt", "t_end"});
    for (const auto& [key, value] : p.items()) params[key] = scalar_at(value, "params." + key, mode);
  }
  if (preset) {
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), *preset) == names.end()) {
      throw SchemaError("preset", "unknown preset '" + *preset + "'");
    }
    apply_preset(sc, *preset, params);
  } else if (root.contains("params")) {
    throw SchemaError("params", "only meaningful together with a preset");
  }

  if (root.contains("structure")) {
    const json& s = root["structure"];
    check_keys(s, "structure", {"kind", "n", "theta", "e", "B"});
    StructureKind kind = StructureKind::deriglazov_canonical;
    if (s.contains("kind")) {
      try {
        kind = parse_structure_kind(string_at(s["kind"], "structure.kind"));
      } catch (const SchemaError&) {
        throw;
      } catch (const Error& e) {
        throw SchemaError("structure.kind", e.what());
      }
    }
    if (!s.contains("theta")) throw SchemaError("structure.theta", "required");
    const json& th = s["theta"];
    if (!th.is_array() || th.empty()) throw SchemaError("structure.theta", "expected an n x n list of lists");
    std::size_t n = th.size();
    if (s.contains("n")) {
      n = unsigned_at(s["n"], "structure.n");
      if (n == 0) throw SchemaError("structure.n", "must be positive");
      if (th.size() != n) throw SchemaError("structure.theta", "has " + std::to_string(th.size()) + " rows, n = " + std::to_string(n));
    }
    std::vector<Scalar> entries;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = vector_at(th[i], index_path("structure.theta", i), n, mode);
      entries.insert(entries.end(), row.begin(), row.end());
    }
    std::optional<ThetaMatrix> theta;
    try {
      theta.emplace(n, entries);
    } catch (const Error& e) {
      throw SchemaError("structure.theta", e.what());
    }
    if (sc.fields.n != n) sc.fields = FieldConfig::zero(n, sc.fields.e);
    if (sc.init.x.size() != n) {
      sc.init.x.assign(n, Scalar::zero(mode));
      sc.init.p.assign(n, Scalar::zero(mode));
    }
    if (kind == StructureKind::deriglazov_canonical) {
      if (s.contains("B")) throw SchemaError("structure.B", "only valid for the duval-horvathy structure");
      if (s.contains("e")) throw SchemaError("structure.e", "only valid for the duval-horvathy structure (use fields.e)");
      sc.structure = BracketStructure::canonical(*theta);
    } else {
      if (n != 2) throw SchemaError("structure.n", "duval-horvathy structure requires n = 2");
      if (!s.contains("B")) throw SchemaError("structure.B", "required for the duval-horvathy structure");
      const Scalar e = s.contains("e") ? scalar_at(s["e"], "structure.e", mode) : sc.fields.e;
      sc.fields.e = e;
      sc.structure = BracketStructure::duval_horvathy(*theta, e, poly_at(s["B"], "structure.B", n, mode));
    }
  } else if (!preset) {
    throw SchemaError("structure", "required when no preset is given");
  }
  const std::size_t n = sc.n();

  if (root.contains("fields")) {
    const json& f = root["fields"];
    check_keys(f, "fields", {"e", "A", "phi"});
    if (f.contains("e")) sc.fields.e = scalar_at(f["e"], "fields.e", mode);
    if (f.contains("A")) {
      const json& A = f["A"];
      if (!A.is_array() || A.size() != n) {
        throw SchemaError("fields.A", "expected a list of " + std::to_string(n) + " polynomials");
      }
      for (std::size_t i = 0; i < n; ++i) sc.fields.A[i] = poly_at(A[i], index_path("fields.A", i), n, mode);
    }
    if (f.contains("phi")) sc.fields.phi = poly_at(f["phi"], "fields.phi", n, mode);
    if (sc.structure.kind() == StructureKind::duval_horvathy && !(sc.fields.e == sc.structure.e())) {
      throw SchemaError("fields.e", "must equal structure.e for the duval-horvathy structure");
    }
  }

  if (root.contains("gauge")) {
    const json& g = root["gauge"];
    check_keys(g, "gauge", {"f", "M"});
    if (g.contains("f")) sc.gauge_f = poly_at(g["f"], "gauge.f", n, mode);
    if (g.contains("M")) sc.order = unsigned_at(g["M"], "gauge.M");
  }
  if (overrides.order) sc.order = *overrides.order;
  if (sc.order > max_order) {
    throw SchemaError("gauge.M", "truncation order " + std::to_string(sc.order) + " outside 0.." + std::to_string(max_order));
  }

  if (root.contains("init")) {
    const json& in = root["init"];
    check_keys(in, "init", {"x", "p", "v"});
    if (in.contains("x")) sc.init.x = vector_at(in["x"], "init.x", n, mode);
    if (in.contains("p")) sc.init.p = vector_at(in["p"], "init.p", n, mode);
    if (in.contains("v")) sc.init_v = vector_at(in["v"], "init.v", n, mode);
    if (in.contains("p") && in.contains("v")) throw SchemaError("init", "give either p or v, not both");
  }

  bool monitors_given = false;
  if (root.contains("integrator")) {
    const json& ig = root["integrator"];
    check_keys(ig, "integrator", {"method", "dt", "t_end", "form", "monitors"});
    if (ig.contains("method")) sc.integrator.method = string_at(ig["method"], "integrator.method");
    if (ig.contains("dt")) sc.integrator.dt = double_at(ig["dt"], "integrator.dt");
    if (ig.contains("t_end")) sc.integrator.t_end = double_at(ig["t_end"], "integrator.t_end");
    if (ig.contains("form")) {
      sc.form = string_at(ig["form"], "integrator.form");
      if (sc.form != "hamiltonian" && sc.form != "lorentz") {
        throw SchemaError("integrator.form", "expected 'hamiltonian' or 'lorentz'");
      }
      if (sc.form == "lorentz" && sc.structure.kind() != StructureKind::deriglazov_canonical) {
        throw SchemaError("integrator.form", "lorentz form requires the deriglazov-canonical structure");
      }
    }
    try {
      sc.integrator.validate();
    } catch (const Error& e) {
      throw SchemaError("integrator", e.what());
    }
    if (ig.contains("monitors")) {
      monitors_given = true;
      const json& ms = ig["monitors"];
      if (!ms.is_array()) throw SchemaError("integrator.monitors", "expected a list");
      sc.integrator.monitors.clear();
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const std::string path = index_path("integrator.monitors", k);
        const json& m = ms[k];
        if (m.is_string()) {
          const std::string name = m.get<std::string>();
          if (name == "H") {
            if (sc.form == "lorentz") throw SchemaError(path, "monitor H is only available for the hamiltonian form");
            sc.integrator.monitors.emplace_back("H", hamiltonian(sc.fields, sc.structure.kind()));
          } else if (name == "speed2") {
            sc.integrator.monitors.emplace_back("speed2", builtin_speed2(sc));
          } else {
            throw SchemaError(path, "unknown built-in monitor '" + name + "' (H, speed2)");
          }
        } else {
          check_keys(m, path, {"name", "poly"});
          if (!m.contains("name") || !m.contains("poly")) throw SchemaError(path, "needs 'name' and 'poly'");
          sc.integrator.monitors.emplace_back(string_at(m["name"], join(path, "name")),
                                              poly_at(m["poly"], join(path, "poly"), 2 * n, mode));
        }
      }
    }
  }
  if (!monitors_given) {
    // Built-in monitors follow the final fields and structure.
    sc.integrator.monitors.clear();
    if (sc.form == "hamiltonian") sc.integrator.monitors.emplace_back("H", hamiltonian(sc.fields, sc.structure.kind()));
    if (sc.structure.is_symbolic() && sc.structure.kind() == StructureKind::deriglazov_canonical) {
      sc.integrator.monitors.emplace_back("speed2", builtin_speed2(sc));
    }
  }

  if (root.contains("outputs")) {
    const json& o = root["outputs"];
    check_keys(o, "outputs", {"trajectory", "report"});
    if (o.contains("trajectory")) sc.outputs.trajectory = string_at(o["trajectory"], "outputs.trajectory");
    if (o.contains("report")) sc.outputs.report = string_at(o["report"], "outputs.report");
  }

  try {
    sc.fields.validate();
  } catch (const Error& e) {
    throw SchemaError("fields", e.what());
  }
  if (sc.fields.n != n) throw SchemaError("fields", "dimension differs from structure.n");
  return sc;
}

ScenarioConfig parse_scenario(const std::string& path, const ParseOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  ScenarioConfig sc = parse_scenario_text(text, overrides);
  if (!json::parse(text).contains("name")) sc.name = std::filesystem::path(path).stem().string();
  return sc;
}

ScenarioConfig preset_scenario(const std::string& preset, const ParseOverrides& overrides) {
  ParseOverrides o = overrides;
  o.preset = preset;
  const std::string mode = overrides.mode ? std::string(to_string(*overrides.mode)) : "exact";
  return parse_scenario_text("{\"mode\": \"" + mode + "\"}", o);
}

// ---------------------------------------------------------------------------
// Output helpers

void write_json(const json& j, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
  if (!os) throw Error("failed writing '" + path + "'");
}

namespace {

std::string output_path(const std::string& dir, const std::optional<std::string>& configured, const std::string& fallback) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / configured.value_or(fallback)).string();
}

json theta_json(const ThetaMatrix& th) {
  json rows = json::array();
  for (std::size_t i = 0; i < th.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < th.n(); ++j) row.push_back(th(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

json matrix_json(const PolynomialMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_exchange(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

std::size_t matrix_terms(const PolynomialMatrix& m, double tol) {
  std::size_t t = 0;
  for (const auto& p : m.data()) t += p.chopped(tol).size();
  return t;
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Planar constant field read off a symmetric-gauge configuration.
std::optional<Scalar> planar_constant_b(const FieldConfig& fc) {
  if (fc.n != 2) return std::nullopt;
  const std::vector<Scalar> origin(2, Scalar::zero(fc.mode()));
  const Scalar B = (fc.A[1].diff(0) - fc.A[0].diff(1)).eval(origin);
  const auto sym = symmetric_gauge(B);
  if (fc.A[0] == sym[0] && fc.A[1] == sym[1]) return B;
  return std::nullopt;
}

Polynomial resolve_gauge_function(const ScenarioConfig& sc) {
  if (sc.gauge_f) return *sc.gauge_f;
  if (auto B = planar_constant_b(sc.fields)) {
    return Polynomial::monomial(2, *B / Scalar::from_int(2, sc.mode), {1, 1});
  }
  throw SchemaError("gauge.f", "required unless the fields are a planar symmetric-gauge constant field");
}

}  // namespace

json series_to_json(const GaugeSeries& s) {
  json orders = json::array();
  const std::size_t n = s.n();
  for (unsigned m = 0; m <= s.M; ++m) {
    std::vector<Polynomial> K(n, Polynomial(n, s.f.mode()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        if (!s.theta(i, l).is_zero()) K[i] += s.J[m][l] * s.theta(i, l);
      }
    }
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any = any || !s.J[m][i].is_zero() || !K[i].is_zero();
    if (!any) continue;
    json J = json::array(), Kj = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      J.push_back(to_exchange(s.J[m][i]));
      Kj.push_back(to_exchange(K[i]));
    }
    orders.push_back({{"m", m}, {"J", J}, {"K", Kj}, {"K_theta_order", m + 1}});
  }
  return {{"M", s.M},
          {"n", n},
          {"e", s.e.to_string()},
          {"f", to_exchange(s.f)},
          {"theta", theta_json(s.theta)},
          {"phase_theta", theta_json(s.phase_theta())},
          {"orders", orders}};
}

// ---------------------------------------------------------------------------
// Subcommands

RunResult run_simulate(const ScenarioConfig& sc, const std::string& out_dir) {
  RunResult res;
  EquationsOfMotion eom;
  std::vector<double> init;
  if (sc.form == "lorentz") {
    const FieldConfig f = sc.fields;
    eom = lorentz_rhs(f, sc.structure.theta());
    std::vector<double> v;
    if (sc.init_v) {
      for (const auto& s : *sc.init_v) v.push_back(s.to_double());
    } else {
      const auto d = hamiltonian_rhs(f, sc.structure)(sc.init.flat_double());
      v.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(sc.n()));
    }
    for (const auto& s : sc.init.x) init.push_back(s.to_double());
    init.insert(init.end(), v.begin(), v.end());
  } else {
    if (sc.init_v) throw SchemaError("init.v", "only valid for the lorentz form");
    eom = hamiltonian_rhs(sc.fields, sc.structure);
    init = sc.init.flat_double();
  }
  const Trajectory traj = integrate(eom, init, sc.integrator);
  const std::string csv = output_path(out_dir, sc.outputs.trajectory, sc.name + ".csv");
  traj.write_csv(csv);
  res.files.push_back(csv);

  json drift = json::object();
  for (const auto& [name, values] : traj.monitors) drift[name] = monitor_drift(traj, name);
  std::optional<double> freq;
  try {
    const auto signal = sc.form == "lorentz" ? traj.component(sc.n()) : derivative_series(traj, eom, 0);
    freq = fit_rotation_frequency(traj.times, signal);
  } catch (const InvalidArgument&) {
  }
  res.report = {{"name", sc.name},
                {"form", sc.form},
                {"steps", traj.times.size() - 1},
                {"dt", sc.integrator.dt},
                {"t_end", sc.integrator.t_end},
                {"monitor_drift", drift},
                {"rotation_frequency", nullable(freq)},
                {"final_state", traj.states.back()}};
  const std::string rep = output_path(out_dir, sc.outputs.report, sc.name + ".simulate.json");
  write_json(res.report, rep);
  res.files.push_back(rep);
  return res;
}

RunResult run_gauge_verify(const ScenarioConfig& sc, const std::string& out_dir) {
  RunResult res;
  if (sc.structure.kind() != StructureKind::deriglazov_canonical) {
    throw SchemaError("structure.kind", "gauge-verify requires the deriglazov-canonical structure");
  }
  const Polynomial f = resolve_gauge_function(sc);
  const GaugeSeries s = build_series_for_phase(f, sc.fields.e, sc.structure.theta(), sc.order);
  const double tol = sc.mode == ScalarMode::exact ? 0.0 : 1e-12;

  json mc_terms = json::array();
  bool ok = true;
  for (unsigned m = 0; m <= s.M; ++m) {
    const std::size_t t = matrix_terms(residual_mc(s, m), tol);
    mc_terms.push_back(t);
    ok = ok && t == 0;
  }
  const CompatResidual compat = residual_compat(s);
  json compat_terms = json::array();
  for (unsigned m = 0; m <= s.M; ++m) {
    const std::size_t t = matrix_terms(compat.kk[m], tol) + matrix_terms(compat.kj[m], tol);
    compat_terms.push_back(t);
    ok = ok && t == 0;
  }
  const GradedPolynomial inv = invariance_residual(sc.fields, s);
  bool inv_ok = true;
  for (unsigned k = 0; k <= s.M; ++k) inv_ok = inv_ok && inv.part(k).chopped(tol).is_zero();
  ok = ok && inv_ok;

  // Orientation and closed form for the planar constant field (B = 1 if the fields carry none).
  const Scalar e = sc.fields.e.converted(ScalarMode::exact);
  const Scalar B = planar_constant_b(sc.fields).value_or(Scalar::one(sc.mode)).converted(ScalarMode::exact);
  Rational theta12 = sc.n() >= 2 ? sc.structure.theta()(0, 1).converted(ScalarMode::exact).rational() : Rational(0);
  const Rational probe = theta12 == 0 ? Rational(1) : Rational(abs(theta12));
  const int orientation = resolve_orientation(e.rational(), B.rational(), probe);
  ok = ok && orientation != 0;
  const ConstantBGauge ab = constant_b_closed_form(e.to_double(), B.to_double(), theta12.get_d(), orientation == 0 ? -1 : orientation);

  res.ok = ok;
  res.report = {{"name", sc.name},
                {"mode", std::string(to_string(sc.mode))},
                {"orders", s.M},
                {"gauge_function", to_exchange(f)},
                {"residual_mc_max_terms", mc_terms},
                {"residual_compat_terms", compat_terms},
                {"invariance_ok", inv_ok},
                {"orientation_resolved", orientation},
                {"ab", {{"a", ab.a}, {"b", ab.b}, {"e", ab.e}, {"B", ab.B}, {"theta", ab.theta}}},
                {"ok", ok}};
  const std::string rep = output_path(out_dir, sc.outputs.report, sc.name + ".gauge-verify.json");
  write_json(res.report, rep);
  res.files.push_back(rep);
  return res;
}

RunResult run_series_dump(const ScenarioConfig& sc, const std::string& out_dir) {
  RunResult res;
  const Polynomial f = resolve_gauge_function(sc);
  const GaugeSeries s = build_series_for_phase(f, sc.fields.e, sc.structure.theta(), sc.order);
  res.report = series_to_json(s);
  const std::string rep = output_path(out_dir, sc.outputs.report, sc.name + ".series.json");
  write_json(res.report, rep);
  res.files.push_back(rep);
  return res;
}

RunResult run_darboux_compare(const ScenarioConfig& sc, const std::string& out_dir) {
  RunResult res;
  if (sc.structure.kind() != StructureKind::deriglazov_canonical) {
    throw SchemaError("structure.kind", "darboux-compare requires the deriglazov-canonical structure");
  }
  const ThetaMatrix& theta = sc.structure.theta();
  const std::size_t n = sc.n();
  bool quadratic = sc.fields.phi.total_degree() <= 2;
  for (const auto& a : sc.fields.A) quadratic = quadratic && a.total_degree() <= 1;
  const EliminationMode mode = quadratic ? EliminationMode::exact_quadratic : EliminationMode::perturbative_first_order;
  const LagrangianModel model = build_lagrangian(sc.fields, theta, mode);

  // Hamiltonian (x, p) flow mapped to q against the Euler-Lagrange flow from matching data.
  const EquationsOfMotion ham = hamiltonian_rhs(sc.fields, sc.structure);
  const std::vector<double> z0 = sc.init.flat_double();
  const Trajectory ht = integrate(ham, z0, sc.integrator);
  const auto qmap = darboux_map(theta);
  std::vector<FloatEvaluator> qeval;
  for (const auto& q : qmap) qeval.emplace_back(q);
  const BracketStructure flat = BracketStructure::canonical(ThetaMatrix::zero(n, sc.mode));
  const EquationsOfMotion qflow = hamiltonian_flow(darboux_hamiltonian(sc.fields, theta), flat);
  std::vector<double> init(2 * n);
  for (std::size_t i = 0; i < n; ++i) init[i] = qeval[i](z0);
  std::vector<double> qp0(init.begin(), init.begin() + static_cast<std::ptrdiff_t>(n));
  qp0.insert(qp0.end(), z0.begin() + static_cast<std::ptrdiff_t>(n), z0.end());
  const auto qdot0 = qflow(qp0);
  for (std::size_t i = 0; i < n; ++i) init[n + i] = qdot0[i];

  IntegratorConfig ic = sc.integrator;
  ic.monitors = {{"E", model.E}};
  const Trajectory el = integrate(euler_lagrange_rhs(model), init, ic);
  double dev = 0.0;
  for (std::size_t k = 0; k < ht.states.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(qeval[i](ht.states[k]) - el.states[k][i]));
  }
  const double drift = monitor_drift(el, "E");

  json kappa = nullptr, ratio = nullptr, coeffs = nullptr;
  bool ok = true;
  if (model.kappa) {
    const double k = model.kappa->to_double();
    kappa = k;
    const auto kc = detect_kappa_case(sc.fields, theta);
    const double e = sc.fields.e.to_double();
    const double w2 = kc->omega2.to_double();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const FloatEvaluator E(model.E);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::vector<double> s{U(rng), U(rng), U(rng), U(rng)};
      const double E0 = 0.5 * (s[2] * s[2] + s[3] * s[3]) + 0.5 * e * w2 * (s[0] * s[0] + s[1] * s[1]);
      worst = std::max(worst, std::abs(E(s) / E0 - 2 * k));
    }
    ratio = worst;
    const KappaCoefficients c = kappa_coefficients(model);
    const double B = kc->B.to_double();
    const double th = theta(0, 1).to_double();
    const double Bt = B + e * th * B * B / 4;
    coeffs = {{"structured", c.structured},
              {"rotational_over_kinetic", c.rotational.to_double() / c.kinetic.to_double()},
              {"rotational_derived", e * (Bt + th * w2)},
              {"rotational_displayed", e * (Bt + w2 * th / 4)},
              {"potential_over_kinetic", c.potential.to_double() / c.kinetic.to_double()},
              {"kinetic", c.kinetic.to_double()}};
    ok = ok && worst < 1e-12 && c.structured;
  }
  if (mode == EliminationMode::exact_quadratic) ok = ok && dev < 1e-8 && drift < 1e-8;
  res.ok = ok;
  res.report = {{"name", sc.name},
                {"mode", std::string(to_string(mode))},
                {"max_traj_deviation", dev},
                {"energy_drift", drift},
                {"kappa", kappa},
                {"e_ratio_check", ratio},
                {"kappa_coefficients", coeffs},
                {"ok", ok}};
  const std::string rep = output_path(out_dir, sc.outputs.report, sc.name + ".darboux-compare.json");
  write_json(res.report, rep);
  res.files.push_back(rep);
  return res;
}

RunResult run_strength(const ScenarioConfig& sc, const std::string& out_dir) {
  RunResult res;
  const PolynomialMatrix F = field_strength(sc.fields, sc.structure.theta());
  res.report = {{"name", sc.name}, {"n", sc.n()}, {"theta", theta_json(sc.structure.theta())}, {"F", matrix_json(F)}};
  const std::string rep = output_path(out_dir, sc.outputs.report, sc.name + ".strength.json");
  write_json(res.report, rep);
  res.files.push_back(rep);
  return res;
}

std::vector<std::string> subcommands() { return {"simulate", "gauge-verify", "series-dump", "darboux-compare", "strength"}; }

int run_command(const std::string& subcommand, const std::vector<ScenarioConfig>& scenarios, const std::string& out_dir,
                std::ostream& log) {
  RunResult (*fn)(const ScenarioConfig&, const std::string&) = nullptr;
  if (subcommand == "simulate") fn = run_simulate;
  else if (subcommand == "gauge-verify") fn = run_gauge_verify;
  else if (subcommand == "series-dump") fn = run_series_dump;
  else if (subcommand == "darboux-compare") fn = run_darboux_compare;
  else if (subcommand == "strength") fn = run_strength;
  else throw InvalidArgument("unknown subcommand '" + subcommand + "'");

  std::set<std::string> names;
  for (const auto& sc : scenarios) {
    if (!names.insert(sc.name).second) throw InvalidArgument("duplicate scenario name '" + sc.name + "' in batch");
  }
  std::vector<std::future<RunResult>> jobs;
  for (const auto& sc : scenarios) jobs.push_back(std::async(std::launch::async, fn, std::cref(sc), std::cref(out_dir)));
  int status = 0;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    try {
      const RunResult r = jobs[k].get();
      for (const auto& f : r.files) log << scenarios[k].name << ": wrote " << f << '\n';
      if (!r.ok) {
        log << scenarios[k].name << ": checks failed\n";
        status = std::max(status, 1);
      }
    } catch (const std::exception& e) {
      log << scenarios[k].name << ": error: " << e.what() << '\n';
      status = 2;
    }
  }
  return status;
}

}  // namespace ncmech
