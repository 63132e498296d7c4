#include "tpadlab/units.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "tpadlab/csv.hpp"

namespace tpadlab::units {

namespace {

struct UnitEntry {
    Dimension dim;
    std::string_view suffix;
    double to_si;
};

// The longest matching suffix wins ("mm" over "m", "Ohm" over "m").
constexpr std::array kUnits{
    UnitEntry{Dimension::Length, "mm", 1e-3},
    UnitEntry{Dimension::Length, "um", 1e-6},
    UnitEntry{Dimension::Length, "µm", 1e-6},
    UnitEntry{Dimension::Length, "nm", 1e-9},
    UnitEntry{Dimension::Length, "cm", 1e-2},
    UnitEntry{Dimension::Length, "m", 1.0},
    UnitEntry{Dimension::Density, "kg/m3", 1.0},
    UnitEntry{Dimension::Density, "g/cm3", 1e3},
    UnitEntry{Dimension::Pressure, "kN/mm2", 1e9},
    UnitEntry{Dimension::Pressure, "GPa", 1e9},
    UnitEntry{Dimension::Pressure, "MPa", 1e6},
    UnitEntry{Dimension::Pressure, "kPa", 1e3},
    UnitEntry{Dimension::Pressure, "Pa", 1.0},
    UnitEntry{Dimension::Capacitance, "pF", 1e-12},
    UnitEntry{Dimension::Capacitance, "nF", 1e-9},
    UnitEntry{Dimension::Capacitance, "uF", 1e-6},
    UnitEntry{Dimension::Capacitance, "F", 1.0},
    UnitEntry{Dimension::Inductance, "mH", 1e-3},
    UnitEntry{Dimension::Inductance, "uH", 1e-6},
    UnitEntry{Dimension::Inductance, "H", 1.0},
    UnitEntry{Dimension::Resistance, "kOhm", 1e3},
    UnitEntry{Dimension::Resistance, "Ohm", 1.0},
    UnitEntry{Dimension::Resistance, "ohm", 1.0},
    UnitEntry{Dimension::Frequency, "MHz", 1e6},
    UnitEntry{Dimension::Frequency, "kHz", 1e3},
    UnitEntry{Dimension::Frequency, "Hz", 1.0},
    UnitEntry{Dimension::Voltage, "mV", 1e-3},
    UnitEntry{Dimension::Voltage, "V", 1.0},
    UnitEntry{Dimension::Velocity, "mm/s", 1e-3},
    UnitEntry{Dimension::Velocity, "m/s", 1.0},
};

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);

    const UnitEntry* match = nullptr;
    for (const auto& u : kUnits) {
        if (text.size() > u.suffix.size() && text.ends_with(u.suffix) &&
            (!match || u.suffix.size() > match->suffix.size())) {
            match = &u;
        }
    }
    double scale = 1.0;
    if (match) {
        if (match->dim != dim) {
            throw std::invalid_argument("unit '" + std::string(match->suffix) + "' does not fit this quantity; use " +
                                        accepted_units(dim));
        }
        scale = match->to_si;
        text.remove_suffix(match->suffix.size());
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    }
    double value = 0.0;
    if (!csv::parse_number(text, value) || !std::isfinite(value)) {
        throw std::invalid_argument("cannot read '" + std::string(text) + "' as a number; accepted units: " +
                                    accepted_units(dim));
    }
    return value * scale;
}

std::string accepted_units(Dimension dim) {
    std::string out;
    for (const auto& u : kUnits) {
        if (u.dim != dim) continue;
        if (!out.empty()) out += ", ";
        out += u.suffix;
    }
    return out.empty() ? std::string("none (dimensionless)") : out + " (bare number = SI)";
}

}  // namespace tpadlab::units
