#include "tpadlab/beam.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "tpadlab/csv.hpp"
#include "tpadlab/error.hpp"

namespace tpadlab::beam {

namespace {

void validate(const BeamGeometry& geom) {
    if (!std::isfinite(geom.width) || geom.width <= 0.0) throw InvalidProperty("beam width must be positive");
}

void validate_inputs(const GlassSpec& glass, const ActuatorSpec& actuator) {
    tpadlab::validate(glass);
    tpadlab::validate(actuator);
}

// Per-unit-width sandwich stiffness D1' = D1 / l_w.
double sandwich_stiffness_per_width(const GlassSpec& glass, const ActuatorSpec& actuator) {
    const double hp = glass.thickness;
    const double ha = actuator.thickness;
    return glass.youngs_modulus * hp * hp * hp / 3.0 +
           actuator.youngs_modulus * (ha * ha * ha / 3.0 + hp * ha * ha + hp * hp * ha);
}

}  // namespace

double reference_angular_frequency() { return 2.0 * std::numbers::pi * 30e3; }

double flexural_stiffness_sandwich(const GlassSpec& glass, const ActuatorSpec& actuator, const BeamGeometry& geom) {
    validate_inputs(glass, actuator);
    validate(geom);
    return geom.width * sandwich_stiffness_per_width(glass, actuator);
}

double flexural_stiffness_plate(const GlassSpec& glass, const BeamGeometry& geom) {
    tpadlab::validate(glass);
    validate(geom);
    const double hp = glass.thickness;
    return glass.youngs_modulus * geom.width * hp * hp * hp / 12.0;
}

Wavenumbers wavenumbers(const GlassSpec& glass, const ActuatorSpec& actuator, const BeamGeometry& geom,
                        double angular_frequency) {
    if (!std::isfinite(angular_frequency) || angular_frequency <= 0.0) {
        throw InvalidProperty("angular frequency must be positive");
    }
    const double w2 = angular_frequency * angular_frequency;
    const double d1 = flexural_stiffness_sandwich(glass, actuator, geom);
    const double mass_sandwich = geom.width * (actuator.density * actuator.thickness + glass.density * glass.thickness);

    Wavenumbers out;
    out.sandwich = std::pow(mass_sandwich * w2 / d1, 0.25);
    out.plate = std::pow(12.0 * w2 * glass.density / (glass.youngs_modulus * glass.thickness * glass.thickness), 0.25);
    return out;
}

double amplification_from_wavenumbers(const GlassSpec& glass, const ActuatorSpec& actuator, const BeamGeometry& geom,
                                      double angular_frequency) {
    const Wavenumbers beta = wavenumbers(glass, actuator, geom, angular_frequency);
    const double d1 = flexural_stiffness_sandwich(glass, actuator, geom);
    const double hp = glass.thickness;
    const double ratio = beta.sandwich / beta.plate;
    return 12.0 * d1 / (glass.youngs_modulus * hp * hp * hp * geom.width) * ratio * ratio * ratio;
}

AmplificationResult amplification_number(const GlassSpec& glass, const ActuatorSpec& actuator) {
    validate_inputs(glass, actuator);
    const double hp = glass.thickness;
    const double d1p = sandwich_stiffness_per_width(glass, actuator);
    const double mass_term = actuator.density * actuator.thickness / (hp * hp * glass.density) + 1.0 / hp;
    const double inner = std::cbrt(d1p / glass.youngs_modulus) * mass_term / 12.0;

    AmplificationResult out;
    out.d1_prime = d1p;
    out.d2_per_width = flexural_stiffness_plate(glass, BeamGeometry{1.0});
    out.n = 12.0 * std::pow(inner, 0.75);
    const Wavenumbers beta = wavenumbers(glass, actuator, BeamGeometry{1.0}, reference_angular_frequency());
    out.beta_a = beta.sandwich;
    out.beta_p = beta.plate;
    return out;
}

double power_ratio(const GlassSpec& reference, const GlassSpec& other, const ActuatorSpec& actuator) {
    const double n_ref = amplification_number(reference, actuator).n;
    const double n_other = amplification_number(other, actuator).n;
    return (n_ref * n_ref) / (n_other * n_other);
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
    if (name == "thickness") return SweepAxis::Thickness;
    if (name == "density") return SweepAxis::Density;
    if (name == "youngs_modulus" || name == "modulus") return SweepAxis::YoungsModulus;
    return std::nullopt;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Thickness: return "thickness";
        case SweepAxis::Density: return "density";
        case SweepAxis::YoungsModulus: return "youngs_modulus";
    }
    return "unknown";
}

std::vector<SweepRow> sweep_amplification(const GlassSpec& base, const ActuatorSpec& actuator, SweepAxis axis,
                                          std::span<const double> grid) {
    if (grid.empty()) throw EmptyGrid("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] <= 0.0) throw InvalidProperty("sweep grid values must be positive");
        if (i > 0 && grid[i] < grid[i - 1]) throw InvalidProperty("sweep grid must be sorted ascending");
    }

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double value : grid) {
        GlassSpec glass = base;
        switch (axis) {
            case SweepAxis::Thickness: glass.thickness = value; break;
            case SweepAxis::Density: glass.density = value; break;
            case SweepAxis::YoungsModulus: glass.youngs_modulus = value; break;
        }
        const double n = amplification_number(glass, actuator).n;
        rows.push_back(SweepRow{value, n, n * n});
    }
    return rows;
}

std::vector<PowerPrediction> predict_power(std::span<const GlassSpec> designs, const GlassSpec& reference,
                                           const ActuatorSpec& actuator) {
    const double n_ref = amplification_number(reference, actuator).n;
    std::vector<PowerPrediction> rows;
    rows.reserve(designs.size());
    for (const auto& glass : designs) {
        const double n2 = amplification_number(glass, actuator).n_squared();
        rows.push_back(PowerPrediction{glass.name, n2, n_ref * n_ref / n2});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "axis_value,n,n_squared\n";
    for (const auto& r : rows) {
        out << csv::format_number(r.axis_value) << ',' << csv::format_number(r.n) << ','
            << csv::format_number(r.n_squared) << '\n';
    }
}

void write_prediction_csv(std::ostream& out, std::span<const PowerPrediction> rows) {
    out << "name,n_squared,predicted_power_ratio\n";
    for (const auto& r : rows) {
        out << r.name << ',' << csv::format_number(r.n_squared) << ',' << csv::format_number(r.predicted_power_ratio)
            << '\n';
    }
}

}  // namespace tpadlab::beam
