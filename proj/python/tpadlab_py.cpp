#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tpadlab/beam.hpp"
#include "tpadlab/bvdfit.hpp"
#include "tpadlab/circuit.hpp"
#include "tpadlab/dataio.hpp"
#include "tpadlab/error.hpp"
#include "tpadlab/friction.hpp"
#include "tpadlab/materials.hpp"

namespace py = pybind11;
using namespace tpadlab;

namespace {

bvdfit::ImpedanceSpectrum make_spectrum(const std::vector<double>& freq, const std::vector<circuit::Complex>& z) {
    if (freq.size() != z.size()) throw InvalidProperty("frequency and impedance arrays differ in length");
    std::vector<bvdfit::ImpedancePoint> pts(freq.size());
    for (std::size_t i = 0; i < freq.size(); ++i) pts[i] = {freq[i], z[i]};
    return bvdfit::ImpedanceSpectrum(std::move(pts));
}

py::tuple spectrum_arrays(const bvdfit::ImpedanceSpectrum& s) {
    std::vector<double> f;
    std::vector<circuit::Complex> z;
    for (const auto& p : s.points()) {
        f.push_back(p.frequency);
        z.push_back(p.impedance);
    }
    return py::make_tuple(f, z);
}

}  // namespace

PYBIND11_MODULE(tpadlab, m) {
    m.doc() = "Friction, equivalent-circuit, impedance-fitting and glass-design models for ultrasonic friction-reduction plates";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<AnalysisError>(m, "AnalysisError", error.ptr());

    // materials
    py::class_<GlassSpec>(m, "GlassSpec")
        .def(py::init<std::string, double, double, double>(), py::arg("name"), py::arg("thickness"),
             py::arg("density"), py::arg("youngs_modulus"))
        .def_readwrite("name", &GlassSpec::name)
        .def_readwrite("thickness", &GlassSpec::thickness)
        .def_readwrite("density", &GlassSpec::density)
        .def_readwrite("youngs_modulus", &GlassSpec::youngs_modulus)
        .def(py::self == py::self)
        .def("__repr__", [](const GlassSpec& g) {
            return "GlassSpec('" + g.name + "', " + std::to_string(g.thickness) + ", " + std::to_string(g.density) +
                   ", " + std::to_string(g.youngs_modulus) + ")";
        });

    py::class_<ActuatorSpec>(m, "ActuatorSpec")
        .def(py::init<>())
        .def_readwrite("thickness", &ActuatorSpec::thickness)
        .def_readwrite("density", &ActuatorSpec::density)
        .def_readwrite("youngs_modulus", &ActuatorSpec::youngs_modulus)
        .def_readwrite("static_capacitance", &ActuatorSpec::static_capacitance)
        .def_readwrite("coupling", &ActuatorSpec::coupling);

    m.def("default_actuator", &default_actuator);
    m.def("builtin_glasses", [] {
        std::vector<GlassSpec> out;
        for (const auto& d : builtin_library()) out.push_back(d.glass);
        return out;
    });
    m.def("find_glass", [](const std::string& name) {
        const auto d = find_builtin(name);
        if (!d) throw py::key_error(name);
        return d->glass;
    });
    m.def("parse_material_json", &parse_material_json, py::arg("text"));

    // friction
    m.def("relative_friction_velocity",
          [](double f, double a, double velocity, double mu0, double poisson, double psi_star) {
              return friction::relative_friction_velocity({f, a}, {velocity, mu0, poisson, psi_star});
          },
          py::arg("frequency"), py::arg("amplitude"), py::arg("explore_velocity") = 0.05, py::arg("mu0") = 0.25,
          py::arg("poisson") = 0.33, py::arg("psi_star") = 4.69);
    m.def("relative_friction_squeeze",
          [](double a, double u0, double ps, double p0) {
              return friction::relative_friction_squeeze(a, {p0, u0, ps});
          },
          py::arg("amplitude"), py::arg("u0"), py::arg("ps"), py::arg("p0") = 101325.0);
    m.def("contour_amplitude", &friction::contour_amplitude, py::arg("frequency"),
          "Amplitude in micrometres on the iso-friction contour, 16-160 kHz.");

    // circuit
    py::class_<circuit::BvdParams>(m, "BvdParams")
        .def(py::init<double, double, double, double>(), py::arg("inductance"), py::arg("capacitance"),
             py::arg("resistance"), py::arg("static_capacitance"))
        .def_readwrite("inductance", &circuit::BvdParams::inductance)
        .def_readwrite("capacitance", &circuit::BvdParams::capacitance)
        .def_readwrite("resistance", &circuit::BvdParams::resistance)
        .def_readwrite("static_capacitance", &circuit::BvdParams::static_capacitance)
        .def_property_readonly("resonant_frequency", &circuit::resonant_frequency);

    py::class_<circuit::CircuitEvaluation>(m, "CircuitEvaluation")
        .def_readonly("frequency", &circuit::CircuitEvaluation::frequency)
        .def_readonly("x0", &circuit::CircuitEvaluation::x0)
        .def_readonly("x1", &circuit::CircuitEvaluation::x1)
        .def_readonly("z", &circuit::CircuitEvaluation::z)
        .def_readonly("u_g", &circuit::CircuitEvaluation::u_g)
        .def_readonly("delta_p", &circuit::CircuitEvaluation::delta_p)
        .def_readonly("i_g", &circuit::CircuitEvaluation::i_g)
        .def_readonly("u_g_complex_divider", &circuit::CircuitEvaluation::u_g_complex_divider)
        .def_readonly("delta_p_complex_divider", &circuit::CircuitEvaluation::delta_p_complex_divider)
        .def_readonly("velocity", &circuit::CircuitEvaluation::velocity);

    m.def("impedance", &circuit::impedance, py::arg("params"), py::arg("frequency"));
    m.def("real_power",
          [](const circuit::BvdParams& p, double voltage, double shunt) { return circuit::real_power(p, {voltage, shunt}); },
          py::arg("params"), py::arg("voltage"), py::arg("shunt_resistance") = 100.0);
    m.def("evaluate_circuit",
          [](const circuit::BvdParams& p, double voltage, double shunt, std::optional<double> coupling) {
              return circuit::evaluate(p, {voltage, shunt}, coupling);
          },
          py::arg("params"), py::arg("voltage"), py::arg("shunt_resistance") = 100.0, py::arg("coupling") = py::none());

    // bvdfit
    py::class_<bvdfit::FitResult>(m, "FitResult")
        .def_readonly("params", &bvdfit::FitResult::params)
        .def_readonly("residual_norm", &bvdfit::FitResult::residual_norm)
        .def_readonly("iterations", &bvdfit::FitResult::iterations)
        .def_readonly("converged", &bvdfit::FitResult::converged);

    m.def("fit_bvd",
          [](const std::vector<double>& freq, const std::vector<circuit::Complex>& z, double c0, bool fit_c0,
             double series_r, int max_iterations) {
              bvdfit::FitOptions opts;
              opts.fit_static_capacitance = fit_c0;
              opts.series_resistance = series_r;
              opts.max_iterations = max_iterations;
              return bvdfit::fit_bvd(make_spectrum(freq, z), c0, opts);
          },
          py::arg("frequency"), py::arg("impedance"), py::arg("c0"), py::arg("fit_c0") = false,
          py::arg("series_resistance") = 0.0, py::arg("max_iterations") = 500);
    m.def("synthetic_spectrum",
          [](const circuit::BvdParams& truth, double f_min, double f_max, std::size_t count, double noise,
             std::uint64_t seed) {
              return spectrum_arrays(bvdfit::synthetic_spectrum(truth, {f_min, f_max, count, noise, seed, 0.0}));
          },
          py::arg("truth"), py::arg("f_min"), py::arg("f_max"), py::arg("count") = 201, py::arg("noise") = 0.0,
          py::arg("seed") = 1, "Returns (frequencies, complex impedances).");

    // beam
    m.def("amplification_number",
          [](const GlassSpec& g, std::optional<ActuatorSpec> act) {
              return beam::amplification_number(g, act.value_or(default_actuator())).n;
          },
          py::arg("glass"), py::arg("actuator") = py::none());
    m.def("power_ratio",
          [](const GlassSpec& ref, const GlassSpec& other, std::optional<ActuatorSpec> act) {
              return beam::power_ratio(ref, other, act.value_or(default_actuator()));
          },
          py::arg("reference"), py::arg("other"), py::arg("actuator") = py::none(),
          "Predicted real power of `other` relative to `reference`.");
    m.def("sweep_n_squared",
          [](const GlassSpec& base, const std::string& axis, const std::vector<double>& grid) {
              const auto a = beam::parse_sweep_axis(axis);
              if (!a) throw py::value_error("unknown sweep axis: " + axis);
              std::vector<double> out;
              for (const auto& row : beam::sweep_amplification(base, default_actuator(), *a, grid)) out.push_back(row.n_squared);
              return out;
          },
          py::arg("base"), py::arg("axis"), py::arg("grid"));

    // dataio
    py::class_<dataio::TrialSummary>(m, "TrialSummary")
        .def_readonly("drive_frequency", &dataio::TrialSummary::drive_frequency)
        .def_readonly("real_power", &dataio::TrialSummary::real_power)
        .def_readonly("amplitude", &dataio::TrialSummary::amplitude)
        .def_readonly("rms_current", &dataio::TrialSummary::rms_current)
        .def_readonly("low_confidence", &dataio::TrialSummary::low_confidence);

    m.def("summarize_trial",
          [](std::vector<double> v_piezo, std::vector<double> v_shunt, double sample_rate, double shunt,
             std::optional<std::vector<double>> ldv, bool ldv_is_velocity) {
              dataio::TimeTraces t;
              t.sample_rate = sample_rate;
              t.v_piezo = std::move(v_piezo);
              t.v_shunt = std::move(v_shunt);
              if (ldv) {
                  t.ldv = dataio::LdvChannel{ldv_is_velocity ? dataio::LdvKind::Velocity : dataio::LdvKind::Displacement,
                                             std::move(*ldv)};
              }
              return dataio::summarize_trial(t, shunt);
          },
          py::arg("v_piezo"), py::arg("v_shunt"), py::arg("sample_rate") = 300e3, py::arg("shunt_resistance") = 100.0,
          py::arg("ldv") = py::none(), py::arg("ldv_is_velocity") = false);
}
