#include "tpadlab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tpadlab/beam.hpp"
#include "tpadlab/bvdfit.hpp"
#include "tpadlab/circuit.hpp"
#include "tpadlab/csv.hpp"
#include "tpadlab/dataio.hpp"
#include "tpadlab/error.hpp"
#include "tpadlab/friction.hpp"
#include "tpadlab/materials.hpp"
#include "tpadlab/units.hpp"

namespace tpadlab::cli {

namespace {

using units::Dimension;
using Quantity = std::optional<double>;

std::string fmt(double v) { return csv::format_number(v); }

CLI::Option* add_quantity(CLI::App& app, const std::string& name, Quantity& target, Dimension dim,
                          const std::string& desc) {
    auto* opt = app.add_option_function<std::string>(
        name,
        [&target, dim, name](const std::string& raw) {
            try {
                target = units::parse_quantity(raw, dim);
            } catch (const std::invalid_argument& e) {
                throw CLI::ValidationError(name, e.what());
            }
        },
        desc + " [units: " + units::accepted_units(dim) + "]");
    opt->type_name("QUANTITY");
    return opt;
}

std::vector<double> parse_grid(const std::string& raw, Dimension dim) {
    std::vector<double> out;
    for (const auto& cell : csv::split_line(raw)) {
        if (!cell.empty()) out.push_back(units::parse_quantity(cell, dim));
    }
    return out;
}

// "start:stop:count" with units on start and stop.
std::vector<double> parse_range(const std::string& raw, Dimension dim) {
    const auto first = raw.find(':');
    const auto second = raw.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw std::invalid_argument("range must look like start:stop:count");
    }
    const double start = units::parse_quantity(raw.substr(0, first), dim);
    const double stop = units::parse_quantity(raw.substr(first + 1, second - first - 1), dim);
    double count_d = 0.0;
    if (!csv::parse_number(raw.substr(second + 1), count_d) || count_d < 1 || count_d != std::floor(count_d)) {
        throw std::invalid_argument("range count must be a positive integer");
    }
    const auto count = static_cast<std::size_t>(count_d);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

// Stock library, then TPADLAB_MATERIALS, then an explicit --materials file.
MaterialCatalog build_catalog(const std::string& materials_file) {
    MaterialCatalog catalog;
    if (const char* env = std::getenv("TPADLAB_MATERIALS"); env && *env) {
        catalog.add_all(load_material_file(env));
    }
    if (!materials_file.empty()) catalog.add_all(load_material_file(materials_file));
    return catalog;
}

GlassSpec lookup_glass(const MaterialCatalog& catalog, const std::string& name) {
    auto glass = catalog.find(name);
    if (!glass) throw InvalidProperty("unknown glass \"" + name + "\"; see `tpadlab materials --list`");
    return *glass;
}

struct ActuatorFlags {
    Quantity thickness, density, modulus;

    void attach(CLI::App& app) {
        add_quantity(app, "--act-thickness", thickness, Dimension::Length, "Actuator thickness (default 0.3 mm)");
        add_quantity(app, "--act-density", density, Dimension::Density, "Actuator density (default 7.9 g/cm3)");
        add_quantity(app, "--act-modulus", modulus, Dimension::Pressure, "Actuator Young's modulus (default 84 GPa)");
    }

    [[nodiscard]] ActuatorSpec build() const {
        ActuatorSpec a = default_actuator();
        if (thickness) a.thickness = *thickness;
        if (density) a.density = *density;
        if (modulus) a.youngs_modulus = *modulus;
        validate(a);
        return a;
    }
};

// ---------------------------------------------------------------- materials

struct MaterialsCmd {
    bool list = false;
    std::string name;
    std::string materials_file;
    bool json = false;

    void attach(CLI::App& app) {
        app.add_flag("--list", list, "List every known glass (default action)");
        app.add_option("--name", name, "Show a single glass by name, e.g. SLG_0.4");
        app.add_option("--materials", materials_file, "Extra material JSON file (SI units)");
        app.add_flag("--json", json, "Emit the material JSON format instead of CSV");
    }

    void run(std::ostream& out) const {
        const MaterialCatalog catalog = build_catalog(materials_file);
        std::vector<GlassSpec> rows;
        if (!name.empty()) {
            rows.push_back(lookup_glass(catalog, name));
        } else {
            rows = catalog.glasses();
        }
        if (json) {
            out << to_material_json(rows) << '\n';
            return;
        }
        out << "name,thickness_m,density_kg_m3,youngs_modulus_pa\n";
        for (const auto& g : rows) {
            out << g.name << ',' << fmt(g.thickness) << ',' << fmt(g.density) << ',' << fmt(g.youngs_modulus) << '\n';
        }
    }
};

// ---------------------------------------------------------------- friction

struct FrictionCmd {
    std::string model = "velocity";
    Quantity freq, amp, velocity, p0, u0, ps;
    std::optional<double> mu0, poisson, psi_star;

    void attach(CLI::App& app) {
        app.add_option("--model", model, "velocity | squeeze | contour")
            ->check(CLI::IsMember({"velocity", "squeeze", "contour"}))
            ->capture_default_str();
        add_quantity(app, "--freq", freq, Dimension::Frequency, "Vibration frequency");
        add_quantity(app, "--amp", amp, Dimension::Length, "Vibration amplitude");
        add_quantity(app, "--velocity", velocity, Dimension::Velocity, "Finger exploration velocity (default 0.05 m/s)");
        app.add_option("--mu0", mu0, "Friction coefficient without vibration, dimensionless (default 0.25)");
        app.add_option("--poisson", poisson, "Fingertip Poisson ratio, dimensionless (default 0.33)");
        app.add_option("--psi-star", psi_star, "Characteristic psi, dimensionless (default 4.69)");
        add_quantity(app, "--p0", p0, Dimension::Pressure, "Atmospheric pressure (default 101325 Pa)");
        add_quantity(app, "--u0", u0, Dimension::Length, "Squeeze-film gap at rest (required for squeeze)");
        add_quantity(app, "--ps", ps, Dimension::Pressure, "Finger pressing pressure (required for squeeze)");
    }

    void run(std::ostream& out) const {
        if (model == "contour") {
            if (!freq) throw CLI::RequiredError("--freq");
            out << "frequency_hz,amplitude_um\n" << fmt(*freq) << ',' << fmt(friction::contour_amplitude(*freq)) << '\n';
            return;
        }
        if (!amp) throw CLI::RequiredError("--amp");
        if (model == "squeeze") {
            if (!u0) throw CLI::RequiredError("--u0");
            if (!ps) throw CLI::RequiredError("--ps");
            friction::SqueezeFilmParams params;
            if (p0) params.p0 = *p0;
            params.u0 = *u0;
            params.ps = *ps;
            out << "amplitude_m,relative_friction\n"
                << fmt(*amp) << ',' << fmt(friction::relative_friction_squeeze(*amp, params)) << '\n';
            return;
        }
        if (!freq) throw CLI::RequiredError("--freq");
        friction::FrictionParams params;
        if (velocity) params.explore_velocity = *velocity;
        if (mu0) params.mu0 = *mu0;
        if (poisson) params.poisson = *poisson;
        if (psi_star) params.psi_star = *psi_star;
        const friction::VibrationState vib{*freq, *amp};
        const double mu = friction::relative_friction_velocity(vib, params);
        out << "frequency_hz,amplitude_m,psi,relative_friction\n"
            << fmt(*freq) << ',' << fmt(*amp) << ',' << (*amp > 0.0 ? fmt(friction::psi(vib, params)) : "inf") << ','
            << fmt(mu) << '\n';
    }
};

// ---------------------------------------------------------------- circuit

struct CircuitCmd {
    Quantity inductance, capacitance, resistance, c0, fr, voltage, shunt, freq;
    std::optional<double> coupling;
    bool peak = false;

    void attach(CLI::App& app) {
        add_quantity(app, "--L", inductance, Dimension::Inductance, "Motional inductance");
        add_quantity(app, "--C", capacitance, Dimension::Capacitance,
                     "Motional capacitance (default 1 nF when only --fr is given)");
        add_quantity(app, "--R", resistance, Dimension::Resistance, "Motional resistance")->required();
        add_quantity(app, "--C0", c0, Dimension::Capacitance, "Static capacitance (default 9.88 nF)");
        add_quantity(app, "--fr", fr, Dimension::Frequency,
                     "Resonant frequency; sets L from C when --L is absent");
        add_quantity(app, "--voltage", voltage, Dimension::Voltage, "Source voltage U_i, RMS unless --peak")
            ->required();
        app.add_flag("--peak", peak, "Interpret --voltage as a peak amplitude and convert to RMS");
        add_quantity(app, "--shunt", shunt, Dimension::Resistance, "Shunt resistance R0 (default 100 Ohm)");
        add_quantity(app, "--freq", freq, Dimension::Frequency,
                     "Also report the impedance at this frequency");
        app.add_option("--coupling", coupling, "Electromechanical coupling gamma in N/V; enables the velocity column");
    }

    [[nodiscard]] circuit::BvdParams params() const {
        circuit::BvdParams p;
        p.resistance = *resistance;
        p.static_capacitance = c0.value_or(9.88e-9);
        p.capacitance = capacitance.value_or(1e-9);
        if (inductance) {
            if (!capacitance) throw CLI::RequiredError("--C");
            p.inductance = *inductance;
        } else if (fr) {
            const double w = circuit::angular_frequency(*fr);
            p.inductance = 1.0 / (w * w * p.capacitance);
        } else {
            throw CLI::RequiredError("--L or --fr");
        }
        return p;
    }

    void run(std::ostream& out) const {
        const auto p = params();
        circuit::DriveConfig drive{peak ? circuit::peak_to_rms(*voltage) : *voltage, shunt.value_or(100.0)};
        const auto e = circuit::evaluate(p, drive, coupling);
        out << "frequency_hz,x0_ohm,x1_ohm,z_real_ohm,z_imag_ohm,z_abs_ohm,u_g_v,delta_p_w,i_g_a,"
               "u_g_complex_divider_v,delta_p_complex_divider_w,velocity_m_s\n";
        out << fmt(e.frequency) << ',' << fmt(e.x0) << ',' << fmt(e.x1) << ',' << fmt(e.z.real()) << ','
            << fmt(e.z.imag()) << ',' << fmt(std::abs(e.z)) << ',' << fmt(e.u_g) << ',' << fmt(e.delta_p) << ','
            << fmt(e.i_g) << ',' << fmt(e.u_g_complex_divider) << ',' << fmt(e.delta_p_complex_divider) << ','
            << (e.velocity ? fmt(*e.velocity) : std::string()) << '\n';
        if (freq) {
            const auto z = circuit::impedance(p, *freq);
            out << "\nfrequency_hz,z_real_ohm,z_imag_ohm,z_abs_ohm\n"
                << fmt(*freq) << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(std::abs(z)) << '\n';
        }
    }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
    std::string input;
    bool synthetic = false;
    Quantity inductance, capacitance, resistance, fr, c0, series_r;
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::size_t points = 201;
    double span = 0.1;
    bool fit_c0 = false;
    int max_iter = 500;
    std::string curve_path;
    std::string spectrum_path;

    void attach(CLI::App& app) {
        app.add_option("--input", input, "Impedance CSV (frequency_hz,magnitude_ohm,phase_deg)");
        app.add_flag("--synthetic", synthetic, "Fit a generated spectrum instead of --input");
        add_quantity(app, "--L", inductance, Dimension::Inductance, "Synthetic truth: motional inductance");
        add_quantity(app, "--C", capacitance, Dimension::Capacitance, "Synthetic truth: motional capacitance");
        add_quantity(app, "--R", resistance, Dimension::Resistance, "Synthetic truth: motional resistance");
        add_quantity(app, "--fr", fr, Dimension::Frequency, "Synthetic truth: resonance, sets L from C");
        add_quantity(app, "--c0", c0, Dimension::Capacitance, "Known static capacitance (default 9.88 nF)");
        add_quantity(app, "--series-r", series_r, Dimension::Resistance,
                     "Resistance in series with the device in the measurement (default 0 Ohm)");
        app.add_option("--noise", noise, "Synthetic noise, fraction of |Z| (e.g. 0.01 for 1%)")->capture_default_str();
        app.add_option("--seed", seed, "Synthetic noise seed")->capture_default_str();
        app.add_option("--points", points, "Synthetic point count")->capture_default_str();
        app.add_option("--span", span, "Synthetic window half-width as a fraction of f_r")->capture_default_str();
        app.add_flag("--fit-c0", fit_c0, "Fit C0 as well, starting from --c0");
        app.add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
        app.add_option("--curve", curve_path, "Write measured and fitted curves to this CSV");
        app.add_option("--write-spectrum", spectrum_path, "Write the (synthetic) spectrum to this impedance CSV");
    }

    [[nodiscard]] bvdfit::ImpedanceSpectrum spectrum() const {
        if (!synthetic) {
            if (input.empty()) throw CLI::RequiredError("--input or --synthetic");
            return bvdfit::load_impedance_csv(input);
        }
        if (!resistance || !capacitance || !(inductance || fr)) {
            throw CLI::RequiredError("--synthetic needs --R, --C and --L or --fr");
        }
        circuit::BvdParams truth{0.0, *capacitance, *resistance, c0.value_or(9.88e-9)};
        if (inductance) {
            truth.inductance = *inductance;
        } else {
            const double w = circuit::angular_frequency(*fr);
            truth.inductance = 1.0 / (w * w * truth.capacitance);
        }
        const double f0 = circuit::resonant_frequency(truth);
        bvdfit::SyntheticSpectrumConfig cfg;
        cfg.f_min = f0 * (1.0 - span);
        cfg.f_max = f0 * (1.0 + span);
        cfg.count = points;
        cfg.noise = noise;
        cfg.seed = seed;
        cfg.series_resistance = series_r.value_or(0.0);
        return bvdfit::synthetic_spectrum(truth, cfg);
    }

    void run(std::ostream& out, std::ostream& err) const {
        const auto spec = spectrum();
        if (!spectrum_path.empty()) {
            std::ofstream f(spectrum_path);
            bvdfit::write_impedance_csv(f, spec);
        }
        bvdfit::FitOptions opts;
        opts.fit_static_capacitance = fit_c0;
        opts.series_resistance = series_r.value_or(0.0);
        opts.max_iterations = max_iter;
        bvdfit::FitResult r;
        try {
            r = bvdfit::fit_bvd(spec, c0.value_or(9.88e-9), opts);
        } catch (const bvdfit::FitNotConverged& e) {
            err << "best parameters so far: L=" << fmt(e.best().params.inductance)
                << " C=" << fmt(e.best().params.capacitance) << " R=" << fmt(e.best().params.resistance) << '\n';
            throw;
        }
        out << "inductance_h,capacitance_f,resistance_ohm,static_capacitance_f,resonant_frequency_hz,residual_norm,"
               "iterations,converged\n";
        out << fmt(r.params.inductance) << ',' << fmt(r.params.capacitance) << ',' << fmt(r.params.resistance) << ','
            << fmt(r.params.static_capacitance) << ',' << fmt(circuit::resonant_frequency(r.params)) << ','
            << fmt(r.residual_norm) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
        if (!curve_path.empty()) {
            std::ofstream f(curve_path);
            f << "frequency_hz,measured_magnitude_ohm,measured_phase_deg,model_magnitude_ohm,model_phase_deg\n";
            for (const auto& p : spec.points()) {
                const auto z = bvdfit::model_impedance(r.params, p.frequency, opts.series_resistance);
                f << fmt(p.frequency) << ',' << fmt(std::abs(p.impedance)) << ','
                  << fmt(std::arg(p.impedance) * 180.0 / std::numbers::pi) << ',' << fmt(std::abs(z)) << ','
                  << fmt(std::arg(z) * 180.0 / std::numbers::pi) << '\n';
            }
        }
    }
};

// ---------------------------------------------------------------- beam

struct BeamCmd {
    std::string glass = "SLG_0.4";
    std::string reference;
    std::string materials_file;
    Quantity thickness, density, modulus;
    std::string sweep;
    std::string grid;
    std::string range;
    ActuatorFlags actuator;

    void attach(CLI::App& app) {
        app.add_option("--glass", glass, "Glass name from the library")->capture_default_str();
        app.add_option("--reference", reference, "Reference glass for the predicted power ratio");
        app.add_option("--materials", materials_file, "Extra material JSON file (SI units)");
        add_quantity(app, "--thickness", thickness, Dimension::Length, "Override glass thickness");
        add_quantity(app, "--density", density, Dimension::Density, "Override glass density");
        add_quantity(app, "--modulus", modulus, Dimension::Pressure, "Override glass Young's modulus");
        app.add_option("--sweep", sweep, "Sweep axis: thickness | density | youngs_modulus")
            ->check(CLI::IsMember({"thickness", "density", "youngs_modulus", "modulus"}));
        app.add_option("--grid", grid,
                       "Comma-separated sweep values with units (thickness: mm/m, density: g/cm3/kg/m3, "
                       "modulus: GPa/kN/mm2/Pa)");
        app.add_option("--range", range, "Sweep values as start:stop:count, units as for --grid");
        actuator.attach(app);
    }

    void run(std::ostream& out, std::ostream& err) const {
        const auto catalog = build_catalog(materials_file);
        GlassSpec g = lookup_glass(catalog, glass);
        if (thickness || density || modulus) g.name += "*";
        if (thickness) g.thickness = *thickness;
        if (density) g.density = *density;
        if (modulus) g.youngs_modulus = *modulus;
        const ActuatorSpec act = actuator.build();

        if (!sweep.empty()) {
            const auto axis = *beam::parse_sweep_axis(sweep);
            const Dimension dim = axis == beam::SweepAxis::Thickness ? Dimension::Length
                                  : axis == beam::SweepAxis::Density ? Dimension::Density
                                                                       : Dimension::Pressure;
            std::vector<double> values;
            try {
                values = range.empty() ? parse_grid(grid, dim) : parse_range(range, dim);
            } catch (const std::invalid_argument& e) {
                throw CLI::ValidationError("--grid/--range", e.what());
            }
            const auto rows = beam::sweep_amplification(g, act, axis, values);
            beam::write_sweep_csv(out, rows);
            return;
        }

        const auto r = beam::amplification_number(g, act);
        out << "name,d1_prime_pa_m3,d2_per_width_pa_m3,beta_a_per_m,beta_p_per_m,n,n_squared";
        if (!reference.empty()) out << ",reference,predicted_power_ratio";
        out << '\n';
        out << g.name << ',' << fmt(r.d1_prime) << ',' << fmt(r.d2_per_width) << ',' << fmt(r.beta_a) << ','
            << fmt(r.beta_p) << ',' << fmt(r.n) << ',' << fmt(r.n_squared());
        if (!reference.empty()) {
            const GlassSpec ref = lookup_glass(catalog, reference);
            out << ',' << ref.name << ',' << fmt(beam::power_ratio(ref, g, act));
            err << "note: power ratios are model-conditional (reflected plate impedance must dominate the actuator's)\n";
        }
        out << '\n';
    }
};

// ---------------------------------------------------------------- predict-power

struct PredictCmd {
    std::string reference = "SLG_0.4";
    std::vector<std::string> glasses;
    std::string materials_file;
    ActuatorFlags actuator;

    void attach(CLI::App& app) {
        app.add_option("--reference", reference, "Reference glass (ratio 1)")->capture_default_str();
        app.add_option("--glass", glasses, "Glass names to predict (default: every known glass)");
        app.add_option("--materials", materials_file, "Extra material JSON file (SI units)");
        actuator.attach(app);
    }

    void run(std::ostream& out, std::ostream& err) const {
        const auto catalog = build_catalog(materials_file);
        std::vector<GlassSpec> designs;
        if (glasses.empty()) {
            designs = catalog.glasses();
        } else {
            for (const auto& name : glasses) designs.push_back(lookup_glass(catalog, name));
        }
        const auto rows = beam::predict_power(designs, lookup_glass(catalog, reference), actuator.build());
        beam::write_prediction_csv(out, rows);
        err << "note: power ratios are model-conditional (reflected plate impedance must dominate the actuator's)\n";
    }
};

// ---------------------------------------------------------------- reduce-traces

struct ReduceCmd {
    std::vector<std::string> files;
    Quantity rate, shunt;
    std::string ldv_kind = "displacement";
    std::string node = "device";
    bool average = false;

    void attach(CLI::App& app) {
        app.add_option("files", files, "Trace CSV files (v_piezo,v_shunt[,ldv])")->required();
        add_quantity(app, "--rate", rate, Dimension::Frequency, "Sample rate (default 300 kHz)");
        add_quantity(app, "--shunt", shunt, Dimension::Resistance, "Shunt resistance R0 (default 100 Ohm)");
        app.add_option("--ldv-kind", ldv_kind, "LDV column holds displacement (m) or velocity (m/s)")
            ->check(CLI::IsMember({"displacement", "velocity"}))
            ->capture_default_str();
        app.add_option("--node", node, "v_piezo logged across the device or at the source (device+shunt)")
            ->check(CLI::IsMember({"device", "source"}))
            ->capture_default_str();
        app.add_flag("--average", average, "Append the mean of all trials as a final row");
    }

    void run(std::ostream& out) const {
        const double fs = rate.value_or(300e3);
        const double r0 = shunt.value_or(100.0);
        const auto kind = ldv_kind == "velocity" ? dataio::LdvKind::Velocity : dataio::LdvKind::Displacement;
        const auto piezo_node = node == "source" ? dataio::PiezoNode::Source : dataio::PiezoNode::Device;

        std::vector<std::future<dataio::TrialSummary>> jobs;
        jobs.reserve(files.size());
        for (const auto& file : files) {
            jobs.push_back(std::async(std::launch::async, [=] {
                return dataio::summarize_trial(dataio::load_traces_csv(file, fs, kind), r0, piezo_node);
            }));
        }
        std::vector<dataio::TrialSummary> summaries;
        for (auto& job : jobs) summaries.push_back(job.get());

        dataio::write_summary_header(out, true);
        for (std::size_t i = 0; i < files.size(); ++i) dataio::write_summary_row(out, summaries[i], files[i]);
        if (average) dataio::write_summary_row(out, dataio::average_trials(summaries), "mean");
    }
};

// ---------------------------------------------------------------- repro

struct ReproCmd {
    std::string figure;
    std::string out_dir;

    void attach(CLI::App& app) {
        app.add_option("figure", figure, "fig4 | fig10 | fig11")
            ->required()
            ->check(CLI::IsMember({"fig4", "fig10", "fig11"}));
        app.add_option("--out-dir", out_dir, "Write one CSV per table into this directory instead of stdout");
    }

    void emit(std::ostream& out, const std::string& table, const std::string& body) const {
        if (out_dir.empty()) {
            out << "# " << table << '\n' << body;
            return;
        }
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / (table + ".csv"));
        f << body;
    }

    void run(std::ostream& out) const {
        if (figure == "fig4") {
            std::ostringstream body;
            body << "frequency_hz,amplitude_um\n";
            for (int khz = 16; khz <= 160; ++khz) {
                const double f = khz * 1e3;
                body << fmt(f) << ',' << fmt(friction::contour_amplitude(f)) << '\n';
            }
            emit(out, "fig4_contour", body.str());
            return;
        }
        const auto library = builtin_library();
        const ActuatorSpec act = default_actuator();
        const GlassSpec base = library.front().glass;  // SLG_0.4
        if (figure == "fig10") {
            struct Axis {
                beam::SweepAxis axis;
                double lo, hi;
            };
            const Axis axes[] = {{beam::SweepAxis::Thickness, 0.3e-3, 1.0e-3},
                                 {beam::SweepAxis::Density, 2000.0, 2600.0},
                                 {beam::SweepAxis::YoungsModulus, 60e9, 80e9}};
            for (const auto& a : axes) {
                std::vector<double> grid(71);
                for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = a.lo + (a.hi - a.lo) * static_cast<double>(i) / 70.0;
                std::ostringstream body;
                beam::write_sweep_csv(body, beam::sweep_amplification(base, act, a.axis, grid));
                emit(out, "fig10_" + std::string(beam::to_string(a.axis)), body.str());
            }
            return;
        }
        std::vector<GlassSpec> designs;
        for (const auto& d : library) designs.push_back(d.glass);
        std::ostringstream body;
        beam::write_prediction_csv(body, beam::predict_power(designs, base, act));
        emit(out, "fig11_power_ratio", body.str());
    }
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tpadlab: friction, circuit, fitting and glass-design models for ultrasonic friction-reduction plates",
                 "tpadlab"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "Write the table to this file instead of stdout");

    MaterialsCmd materials;
    FrictionCmd friction_cmd;
    CircuitCmd circuit_cmd;
    FitCmd fit;
    BeamCmd beam_cmd;
    PredictCmd predict;
    ReduceCmd reduce;
    ReproCmd repro;

    materials.attach(*app.add_subcommand("materials", "Glass property library"));
    friction_cmd.attach(*app.add_subcommand("friction", "Relative friction under vibration"));
    circuit_cmd.attach(*app.add_subcommand("circuit", "Equivalent-circuit power at resonance"));
    fit.attach(*app.add_subcommand("fit", "Fit L, C, R to an impedance spectrum"));
    beam_cmd.attach(*app.add_subcommand("beam", "Amplification number, sweeps and power ratio"));
    predict.attach(*app.add_subcommand("predict-power", "Relative real power of glass designs"));
    reduce.attach(*app.add_subcommand("reduce-traces", "Real power and amplitude from recorded traces"));
    repro.attach(*app.add_subcommand("repro", "Regenerate figure data tables"));

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("tpadlab");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    std::ostringstream table;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "materials") materials.run(table);
        else if (name == "friction") friction_cmd.run(table);
        else if (name == "circuit") circuit_cmd.run(table);
        else if (name == "fit") fit.run(table, err);
        else if (name == "beam") beam_cmd.run(table, err);
        else if (name == "predict-power") predict.run(table, err);
        else if (name == "reduce-traces") reduce.run(table);
        else if (name == "repro") repro.run(table);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParseError;
    } catch (const AnalysisError& e) {
        err << "error: " << e.what() << '\n';
        return kExitAnalysisError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitParseError;
    }

    if (out_path.empty()) {
        out << table.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << out_path << '\n';
            return kExitParseError;
        }
        f << table.str();
    }
    return kExitOk;
}

}  // namespace tpadlab::cli
