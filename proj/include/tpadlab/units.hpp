#pragma once

#include <string>
#include <string_view>

namespace tpadlab::units {

enum class Dimension {
    Length,
    Density,
    Pressure,
    Capacitance,
    Inductance,
    Resistance,
    Frequency,
    Voltage,
    Velocity,
    Dimensionless,
};

/// Parses "<number>[unit]" into SI, e.g. "0.4mm", "2.483g/cm3", "71kN/mm2", "9.88nF".
/// A bare number is taken as already SI. Throws std::invalid_argument on an
/// unknown unit or a unit of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dim);

/// Accepted unit suffixes for a dimension, for help texts.
std::string accepted_units(Dimension dim);

}  // namespace tpadlab::units
