#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sprayer/calc.hpp"
#include "sprayer/config.hpp"
#include "sprayer/controller.hpp"
#include "sprayer/script.hpp"
#include "sprayer/sim.hpp"
#include "sprayer/telemetry.hpp"

namespace py = pybind11;
using namespace sprayer;

namespace {

// Reports and frames cross the boundary as their JSON text, decoded by the
// standard json module so Python sees plain dicts.
py::object loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

RobotConfig config_from(const std::string& text) { return text.empty() ? RobotConfig{} : parse_config(text); }

py::array_t<double> dose_array(const FieldGrid& g) {
  py::array_t<double> a({g.ny(), g.nx()});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) m(j, i) = g.dose(i, j);
  return a;
}

py::array_t<bool> mowed_array(const FieldGrid& g) {
  py::array_t<bool> a({g.ny(), g.nx()});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) m(j, i) = g.mowed(i, j);
  return a;
}

class PySimulation {
 public:
  PySimulation(const std::string& config_text, const std::string& field, double cell, double dt)
      : sim_(config_from(config_text), parse_field_spec(field, cell), dt) {}

  void directive(const std::string& line) { sim_.apply(parse_action(line)); }
  void send(const py::bytes& b) { sim_.apply(Action::send(std::string(b))); }
  void step(int n) {
    if (n < 0) throw std::invalid_argument("step count must be >= 0");
    for (int k = 0; k < n; ++k) sim_.step();
  }
  py::object frame() const { return loads(frame_to_json(make_frame(sim_))); }
  py::object report() const { return loads(report_to_json(sim_.report())); }
  double t() const { return sim_.state().t; }
  std::int64_t tick() const { return sim_.tick(); }
  double dt() const { return sim_.dt(); }
  py::array_t<double> dose() const { return dose_array(sim_.state().grid); }
  py::array_t<bool> mowed() const { return mowed_array(sim_.state().grid); }

 private:
  Simulation sim_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Solar sprayer/mower robot simulator";

  py::register_exception<ScriptError>(m, "ScriptError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ModeError>(m, "ModeError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.attr("TELEMETRY_SCHEMA") = std::string(kTelemetrySchema);

  m.def(
      "calculate",
      [](const std::string& kind, const std::vector<std::string>& params) {
        CalcResult r = calculate(kind, params);
        py::list refs;
        for (const auto& ref : r.references) refs.append(py::dict(py::arg("value") = ref.value, py::arg("note") = ref.note));
        return py::dict(py::arg("kind") = r.kind, py::arg("value") = r.value, py::arg("unit") = r.unit,
                        py::arg("formula") = r.formula, py::arg("references") = refs,
                        py::arg("text") = format_calc(r));
      },
      py::arg("kind"), py::arg("params"), "Closed-form calculator; params are given as strings or numbers.");
  m.def("calc_kinds", &calc_kinds);

  m.def(
      "normalize_config", [](const std::string& text) { return to_config_text(config_from(text)); },
      py::arg("text") = "", "Parses config text and writes back every key in file units.");
  m.def("preset_names", &preset_names);
  m.def("config_schema", [] {
    py::list out;
    for (const auto& k : config_schema())
      out.append(py::dict(py::arg("key") = k.key, py::arg("unit") = k.unit, py::arg("description") = k.description));
    return out;
  });

  m.def(
      "normalize_script", [](const std::string& text) { return format_script(parse_script(text)); }, py::arg("text"),
      "Parses a mission script and writes it back in canonical form.");
  m.def("quantize_time", &quantize_time, py::arg("at"), py::arg("dt"));

  m.def(
      "run_script",
      [](const std::string& script, const std::string& config, const std::string& field, double cell, double dt) {
        const RobotConfig cfg = config_from(config);
        const MissionScript s = parse_script(script);
        validate_script(s, cfg);
        MissionReport r;
        {
          py::gil_scoped_release release;
          r = run_script(s, cfg, parse_field_spec(field, cell), dt);
        }
        return loads(report_to_json(r));
      },
      py::arg("script"), py::arg("config") = "", py::arg("field") = "5x5", py::arg("cell") = 0.05,
      py::arg("dt") = 0.05, "Runs a mission script to its END and returns the report.");

  m.def(
      "validate_frame", [](const std::string& line) { return validate_frame_json(line); }, py::arg("line"),
      "Empty string for a valid telemetry frame, otherwise the first problem.");

  py::class_<PySimulation>(m, "Simulation")
      .def(py::init<const std::string&, const std::string&, double, double>(), py::arg("config") = "",
           py::arg("field") = "5x5", py::arg("cell") = 0.05, py::arg("dt") = 0.05)
      .def("directive", &PySimulation::directive, py::arg("line"), "Applies one directive, e.g. 'BOOM pitch -20'.")
      .def("send", &PySimulation::send, py::arg("data"), "Delivers bytes over the emulated serial link.")
      .def("step", &PySimulation::step, py::arg("n") = 1)
      .def("frame", &PySimulation::frame)
      .def("report", &PySimulation::report)
      .def("dose", &PySimulation::dose, "Dose per cell in litres, indexed [j, i].")
      .def("mowed", &PySimulation::mowed, "Mowed mask, indexed [j, i].")
      .def_property_readonly("t", &PySimulation::t)
      .def_property_readonly("tick", &PySimulation::tick)
      .def_property_readonly("dt", &PySimulation::dt);
}
