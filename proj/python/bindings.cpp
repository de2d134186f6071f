#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ncmech/bracket.hpp"
#include "ncmech/cli.hpp"
#include "ncmech/darboux.hpp"
#include "ncmech/dynamics.hpp"
#include "ncmech/exchange.hpp"
#include "ncmech/gauge.hpp"
#include "ncmech/structure.hpp"

namespace py = pybind11;
using namespace ncmech;

namespace {

ScalarMode mode_of(const std::string& m) { return parse_scalar_mode(m); }

// Anything whose str() parses: int, float, Fraction, "p/q".
Scalar to_scalar(const py::handle& v, ScalarMode mode) {
  if (py::isinstance<py::float_>(v)) {
    const double d = v.cast<double>();
    return mode == ScalarMode::floating ? Scalar::real(d) : Scalar::parse(py::repr(v).cast<std::string>(), mode);
  }
  return Scalar::parse(py::str(v).cast<std::string>(), mode);
}

py::object from_scalar(const Scalar& s) {
  if (!s.is_exact()) return py::float_(s.to_double());
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(s.to_string());
}

Polynomial to_poly(const py::handle& terms, std::size_t n, ScalarMode mode) {
  Polynomial p(n, mode);
  for (const auto& t : terms) {
    const auto pair = t.cast<py::sequence>();
    if (pair.size() != 2) throw InvalidArgument("polynomial terms are (coefficient, exponents) pairs");
    const auto exps = pair[1].cast<std::vector<unsigned>>();
    Polynomial::Exponents e(exps.begin(), exps.end());
    p.add_term(e, to_scalar(pair[0], mode));
  }
  return p;
}

py::list poly_terms(const Polynomial& p) {
  py::list out;
  for (const auto& [e, c] : p.terms()) {
    out.append(py::make_tuple(from_scalar(c), std::vector<unsigned>(e.begin(), e.end())));
  }
  return out;
}

ThetaMatrix to_theta(const py::handle& rows, ScalarMode mode) {
  const auto seq = rows.cast<py::sequence>();
  const std::size_t n = seq.size();
  std::vector<Scalar> entries;
  for (const auto& row : seq) {
    const auto r = row.cast<py::sequence>();
    if (r.size() != n) throw DimensionError("theta must be square");
    for (const auto& v : r) entries.push_back(to_scalar(v, mode));
  }
  return ThetaMatrix(n, std::move(entries));
}

ScenarioParams to_params(const py::dict& d, ScalarMode mode) {
  ScenarioParams p;
  for (const auto& [k, v] : d) p.emplace(k.cast<std::string>(), to_scalar(v, mode));
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Noncommutative particle mechanics: gauge series, dynamics and Darboux reduction";

  auto base = py::register_exception<Error>(m, "NcmechError");
  py::register_exception<InvalidArgument>(m, "InvalidArgumentError", base.ptr());
  py::register_exception<SingularError>(m, "SingularError", base.ptr());
  py::register_exception<ModeError>(m, "ModeError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init([](std::size_t n, const py::iterable& terms, const std::string& mode) {
             return to_poly(terms, n, mode_of(mode));
           }),
           py::arg("nvars"), py::arg("terms") = py::list(), py::arg("mode") = "exact")
      .def_static("variable", [](std::size_t n, std::size_t i, const std::string& mode) {
        return Polynomial::variable(n, i, mode_of(mode));
      }, py::arg("nvars"), py::arg("index"), py::arg("mode") = "exact")
      .def_property_readonly("nvars", &Polynomial::nvars)
      .def_property_readonly("mode", [](const Polynomial& p) { return std::string(to_string(p.mode())); })
      .def("terms", &poly_terms, "List of (coefficient, exponents) in lexicographic order.")
      .def("diff", &Polynomial::diff)
      .def("is_zero", &Polynomial::is_zero)
      .def("total_degree", &Polynomial::total_degree)
      .def("converted", [](const Polynomial& p, const std::string& mode) { return p.converted(mode_of(mode)); })
      .def("__call__", [](const Polynomial& p, const std::vector<double>& x) {
        return p.mode() == ScalarMode::floating ? p.eval(x) : p.converted(ScalarMode::floating).eval(x);
      })
      .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
      .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
      .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
      .def("__neg__", [](const Polynomial& a) { return -a; })
      .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
      .def("__str__", [](const Polynomial& p) { return p.to_string(); })
      .def("__repr__", [](const Polynomial& p) { return "Polynomial(" + p.to_string() + ")"; });

  m.def("bracket", [](const Polynomial& F, const Polynomial& G, const py::sequence& theta) {
    return poisson_bracket_config(F, G, to_theta(theta, F.mode()));
  }, py::arg("F"), py::arg("G"), py::arg("theta"), "Configuration bracket {F, G} for the matrix theta.");

  py::class_<GaugeSeries>(m, "GaugeSeries")
      .def_property_readonly("order", [](const GaugeSeries& s) { return s.M; })
      .def_property_readonly("n", &GaugeSeries::n)
      .def("J", [](const GaugeSeries& s, unsigned k, std::size_t i) { return s.J.at(k).at(i); })
      .def("K", [](const GaugeSeries& s, unsigned k, std::size_t i) { return s.K.at(k).at(i); })
      .def("J_total", &GaugeSeries::J_total)
      .def("K_total", &GaugeSeries::K_total)
      .def("mc_residual_vanishes", [](const GaugeSeries& s, unsigned k) { return is_zero(residual_mc(s, k)); })
      .def("compat_residual_vanishes", [](const GaugeSeries& s) { return residual_compat(s).vanishes(); });

  m.def("build_series", [](const Polynomial& f, const py::handle& e, const py::sequence& theta, unsigned order) {
    return build_series_for_phase(f, to_scalar(e, f.mode()), to_theta(theta, f.mode()), order);
  }, py::arg("f"), py::arg("e"), py::arg("theta"), py::arg("order") = default_order,
     "Gauge series for f canonical for the phase structure {x^i, x^j} = theta^{ij}.");

  m.def("invariance_holds", [](const std::vector<Polynomial>& A, const Polynomial& phi, const GaugeSeries& s) {
    FieldConfig fc{s.n(), A, phi, s.e};
    return invariance_residual(fc, s).vanishes_through(s.M);
  }, py::arg("A"), py::arg("phi"), py::arg("series"));

  m.def("constant_b_closed_form", [](double e, double B, double theta) {
    const ConstantBGauge g = constant_b_closed_form(e, B, theta);
    return py::make_tuple(g.a, g.b);
  }, py::arg("e"), py::arg("B"), py::arg("theta"), "Closed-form (a, b) with J = (a y, b x) for f = Bxy/2.");

  m.def("resolve_orientation", [](const py::handle& e, const py::handle& B, const py::handle& theta) {
    return resolve_orientation(to_scalar(e, ScalarMode::exact).rational(), to_scalar(B, ScalarMode::exact).rational(),
                               to_scalar(theta, ScalarMode::exact).rational());
  });

  m.def("kappa", [](const py::handle& e, const py::handle& B, const py::handle& theta, const py::handle& omega2) {
    return from_scalar(kappa_value(to_scalar(e, ScalarMode::exact), to_scalar(B, ScalarMode::exact),
                                   to_scalar(theta, ScalarMode::exact), to_scalar(omega2, ScalarMode::exact)));
  });

  m.def("critical_theta", [](const py::handle& e, const py::handle& B, const py::handle& omega) {
    return from_scalar(combined_critical_theta(to_scalar(e, ScalarMode::exact), to_scalar(B, ScalarMode::exact),
                                               to_scalar(omega, ScalarMode::exact)));
  });

  m.def("scenario_names", &scenario_names);

  m.def("simulate", [](const std::string& name, const py::dict& params) {
    const Scenario sc = scenario(name, to_params(params, ScalarMode::floating));
    const EquationsOfMotion eom = hamiltonian_rhs(sc.fields, sc.structure);
    Trajectory traj;
    {
      py::gil_scoped_release release;
      traj = integrate(eom, sc.init.flat_double(), sc.integrator);
    }
    py::dict monitors;
    for (const auto& [k, v] : traj.monitors) monitors[py::str(k)] = v;
    py::dict out;
    out["t"] = traj.times;
    out["states"] = traj.states;
    out["monitors"] = monitors;
    return out;
  }, py::arg("name"), py::arg("params"),
     "Integrates a preset scenario; returns {'t', 'states' (x, p rows), 'monitors'}.");

  m.def("rotation_frequency", [](const std::vector<double>& t, const std::vector<double>& signal) {
    return fit_rotation_frequency(t, signal);
  });

  m.def("run", [](const std::string& subcommand, const std::vector<std::string>& presets,
                  const std::vector<std::string>& configs, const std::string& out, const std::string& mode,
                  std::optional<unsigned> order) {
    ParseOverrides o;
    o.mode = mode_of(mode);
    o.order = order;
    std::vector<ScenarioConfig> batch;
    for (const auto& p : presets) batch.push_back(preset_scenario(p, o));
    for (const auto& c : configs) batch.push_back(parse_scenario(c, o));
    std::ostringstream log;
    int status;
    {
      py::gil_scoped_release release;
      status = run_command(subcommand, batch, out, log);
    }
    return py::make_tuple(status, log.str());
  }, py::arg("subcommand"), py::arg("presets") = std::vector<std::string>{},
     py::arg("configs") = std::vector<std::string>{}, py::arg("out") = "out", py::arg("mode") = "exact",
     py::arg("order") = py::none(), "Runs a CLI subcommand in-process; returns (exit status, log).");
}
