#pragma once

#include <complex>
#include <optional>

namespace tpadlab::circuit {

using Complex = std::complex<double>;

/// Equivalent circuit of the plate and finger: a series L-C-R motional branch in
/// parallel with the actuator's static capacitance.
struct BvdParams {
    double inductance = 0.0;          // L, H
    double capacitance = 0.0;         // C, F
    double resistance = 0.0;          // R, Ohm
    double static_capacitance = 0.0;  // C0, F
};

/// Constant-voltage drive through a current-sense shunt.
struct DriveConfig {
    double source_voltage = 0.0;     // U_i, V RMS
    double shunt_resistance = 100.0; // R0, Ohm
};

/// Operating point at the motional resonance.
struct CircuitEvaluation {
    double frequency = 0.0;  // Hz
    double x0 = 0.0;         // |static-branch reactance|, Ohm
    double x1 = 0.0;         // motional reactance, Ohm
    Complex z;               // device impedance, Ohm
    double u_g = 0.0;        // motional voltage from the scalar divider, V
    double delta_p = 0.0;    // real power U_g^2 / R, W
    double i_g = 0.0;        // motional current, A
    /// Same quantities from the phase-aware complex divider U_i Z / (Z + R0).
    double u_g_complex_divider = 0.0;
    double delta_p_complex_divider = 0.0;
    /// Vibration velocity i_g / gamma, m/s; only when a coupling factor is given.
    std::optional<double> velocity;
};

void validate(const BvdParams& p);
void validate(const DriveConfig& d);

double angular_frequency(double frequency);

/// f_r = 1 / (2 pi sqrt(LC)).
double resonant_frequency(const BvdParams& p);

/// |X0| = 1 / (C0 w).
double static_reactance(const BvdParams& p, double frequency);

/// X1 = L w - 1 / (C w).
double motional_reactance(const BvdParams& p, double frequency);

/// Device impedance from the closed form in X0 = -1/(C0 w) and X1.
Complex impedance(const BvdParams& p, double frequency);

/// Device impedance at w = 1/sqrt(LC), where X1 vanishes.
Complex impedance_at_resonance(const BvdParams& p);

/// |Z| = |X0| R / sqrt(R^2 + X0^2) at resonance.
double impedance_magnitude_at_resonance(const BvdParams& p);

/// U_g = U_i |Z| / (|Z| + R0), adding |Z| and R0 as scalars.
double motional_voltage(const BvdParams& p, const DriveConfig& d);

/// Delta P = U_i^2 / (R (1 + R0 sqrt(1/X0^2 + 1/R^2))^2).
double real_power(const BvdParams& p, const DriveConfig& d);

/// U_g(s)/I(s) = (LCs^2 + RCs + 1) / (C0 LC s^3 + C0 RC s^2 + (C0 + C) s) at s = j 2 pi f.
Complex transfer_ug_over_i(const BvdParams& p, double frequency);

CircuitEvaluation evaluate(const BvdParams& p, const DriveConfig& d,
                           std::optional<double> coupling = std::nullopt);

/// Converts a peak (amplitude) voltage to RMS.
double peak_to_rms(double peak);

}  // namespace tpadlab::circuit
