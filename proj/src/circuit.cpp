#include "tpadlab/circuit.hpp"

#include <cmath>
#include <numbers>

#include "tpadlab/error.hpp"

namespace tpadlab::circuit {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const BvdParams& p) {
    if (!positive(p.inductance)) throw InvalidProperty("inductance L must be positive");
    if (!positive(p.capacitance)) throw InvalidProperty("capacitance C must be positive");
    if (!positive(p.resistance)) throw InvalidProperty("resistance R must be positive");
    if (!positive(p.static_capacitance)) throw InvalidProperty("static capacitance C0 must be positive");
}

void validate(const DriveConfig& d) {
    if (!positive(d.source_voltage)) throw InvalidProperty("source voltage must be positive");
    // R0 = 0 is accepted: it models a drive without a shunt.
    if (!std::isfinite(d.shunt_resistance) || d.shunt_resistance < 0.0) {
        throw InvalidProperty("shunt resistance must be non-negative");
    }
}

double angular_frequency(double frequency) { return 2.0 * std::numbers::pi * frequency; }

double resonant_frequency(const BvdParams& p) {
    validate(p);
    return 1.0 / (2.0 * std::numbers::pi * std::sqrt(p.inductance * p.capacitance));
}

double static_reactance(const BvdParams& p, double frequency) {
    return 1.0 / (p.static_capacitance * angular_frequency(frequency));
}

double motional_reactance(const BvdParams& p, double frequency) {
    const double w = angular_frequency(frequency);
    return p.inductance * w - 1.0 / (p.capacitance * w);
}

Complex impedance(const BvdParams& p, double frequency) {
    validate(p);
    if (!positive(frequency)) throw InvalidProperty("frequency must be positive");
    const double x0 = -static_reactance(p, frequency);
    const double x1 = motional_reactance(p, frequency);
    const double r = p.resistance;
    const double den = r * r + (x0 + x1) * (x0 + x1);
    return {x0 * x0 * r / den, x0 * (r * r + x0 * x1 + x1 * x1) / den};
}

Complex impedance_at_resonance(const BvdParams& p) {
    const double x0 = -static_reactance(p, resonant_frequency(p));
    const double r = p.resistance;
    const double den = r * r + x0 * x0;
    return {x0 * x0 * r / den, x0 * r * r / den};
}

double impedance_magnitude_at_resonance(const BvdParams& p) {
    const double x0 = static_reactance(p, resonant_frequency(p));
    const double r = p.resistance;
    return x0 * r / std::sqrt(r * r + x0 * x0);
}

double motional_voltage(const BvdParams& p, const DriveConfig& d) {
    validate(d);
    const double z = impedance_magnitude_at_resonance(p);
    return d.source_voltage * z / (z + d.shunt_resistance);
}

double real_power(const BvdParams& p, const DriveConfig& d) {
    validate(d);
    const double x0 = static_reactance(p, resonant_frequency(p));
    const double r = p.resistance;
    const double divider = 1.0 + d.shunt_resistance * std::sqrt(1.0 / (x0 * x0) + 1.0 / (r * r));
    return d.source_voltage * d.source_voltage / (r * divider * divider);
}

Complex transfer_ug_over_i(const BvdParams& p, double frequency) {
    validate(p);
    if (!positive(frequency)) throw InvalidProperty("frequency must be positive");
    const Complex s(0.0, angular_frequency(frequency));
    const double lc = p.inductance * p.capacitance;
    const double rc = p.resistance * p.capacitance;
    const double c0 = p.static_capacitance;
    const Complex num = lc * s * s + rc * s + 1.0;
    const Complex den = c0 * lc * s * s * s + c0 * rc * s * s + (c0 + p.capacitance) * s;
    return num / den;
}

CircuitEvaluation evaluate(const BvdParams& p, const DriveConfig& d, std::optional<double> coupling) {
    validate(p);
    validate(d);
    if (coupling && !positive(*coupling)) throw InvalidProperty("coupling factor must be positive");

    CircuitEvaluation out;
    out.frequency = resonant_frequency(p);
    out.x0 = static_reactance(p, out.frequency);
    out.x1 = 0.0;
    out.z = impedance_at_resonance(p);
    out.u_g = motional_voltage(p, d);
    out.delta_p = real_power(p, d);
    out.i_g = out.u_g / p.resistance;

    const double exact = d.source_voltage * std::abs(out.z / (out.z + d.shunt_resistance));
    out.u_g_complex_divider = exact;
    out.delta_p_complex_divider = exact * exact / p.resistance;

    if (coupling) out.velocity = out.i_g / *coupling;
    return out;
}

double peak_to_rms(double peak) { return peak / std::numbers::sqrt2; }

}  // namespace tpadlab::circuit
