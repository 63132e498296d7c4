#pragma once

// Reference computations used only by the tests. They follow a different
// algebraic route from the library code they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tpadlab/circuit.hpp"

namespace oracle {

using Complex = std::complex<double>;

/// Parallel combination of the static capacitor and the series R-L-C arm via admittances.
inline Complex parallel_network(const tpadlab::circuit::BvdParams& p, double frequency) {
    const double w = 2.0 * std::numbers::pi * frequency;
    const Complex j{0.0, 1.0};
    const Complex arm = p.resistance + j * w * p.inductance + 1.0 / (j * w * p.capacitance);
    const Complex y = 1.0 / arm + j * w * p.static_capacitance;
    return 1.0 / y;
}

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Random draw with f_r in [20, 45] kHz, C in [0.1, 10] nF, R in [200, 5000] Ohm, C0 in [5, 20] nF.
inline tpadlab::circuit::BvdParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> fr(20e3, 45e3), c(0.1e-9, 10e-9), r(200.0, 5000.0), c0(5e-9, 20e-9);
    tpadlab::circuit::BvdParams p;
    p.capacitance = c(rng);
    const double w = 2.0 * std::numbers::pi * fr(rng);
    p.inductance = 1.0 / (w * w * p.capacitance);
    p.resistance = r(rng);
    p.static_capacitance = c0(rng);
    return p;
}

/// Uniformly sampled tone a sin(2 pi f n / fs + phase).
inline std::vector<double> tone(std::size_t n, double fs, double f, double a, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = a * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs + phase);
    }
    return x;
}

}  // namespace oracle
