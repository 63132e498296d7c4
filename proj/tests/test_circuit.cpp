#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "tpadlab/circuit.hpp"
#include "tpadlab/error.hpp"

using namespace tpadlab;
using namespace tpadlab::circuit;

namespace {

// C0 = 9.88 nF, f_r = 30 kHz; L and C chosen so that sqrt(LC) = 1 / (2 pi 30 kHz).
BvdParams case_30khz(double resistance) {
    const double c = 1e-9;
    const double w = 2.0 * std::numbers::pi * 30e3;
    return BvdParams{1.0 / (w * w * c), c, resistance, 9.88e-9};
}

// Frozen from a hand evaluation with X0 = 1 / (9.88 nF * 2 pi 30 kHz).
constexpr double kX0 = 536.9599969362191;
constexpr double kZreFinger = 126.23150922676831;
constexpr double kZimFinger = -505.4338244675402;
constexpr double kZabsFinger = 520.9584866738923;
constexpr double kUgFinger = 33.55834554830608;
constexpr double kPowerFinger = 0.5237965376462859;
constexpr double kPowerSpring = 0.8849180719292256;

}  // namespace

TEST_CASE("resonant frequency") {
    CHECK(resonant_frequency(BvdParams{1.0, 1.0, 1.0, 1.0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(resonant_frequency(case_30khz(2150.0)) == doctest::Approx(30e3).epsilon(1e-13));
    CHECK_THROWS_AS(resonant_frequency(BvdParams{0.0, 1.0, 1.0, 1.0}), InvalidProperty);
}

TEST_CASE("closed-form impedance equals the parallel network") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logf(std::log(1e3), std::log(100e3));
    for (int i = 0; i < 200; ++i) {
        const auto p = oracle::random_params(rng);
        for (int k = 0; k < 10; ++k) {
            const double f = std::exp(logf(rng));
            CHECK(oracle::rel_err(impedance(p, f), oracle::parallel_network(p, f)) < 1e-9);
            CHECK(oracle::rel_err(transfer_ug_over_i(p, f), oracle::parallel_network(p, f)) < 1e-9);
        }
    }
}

TEST_CASE("impedance at the 30 kHz operating point") {
    const auto p = case_30khz(2150.0);
    const double fr = resonant_frequency(p);
    CHECK(motional_reactance(p, fr) == doctest::Approx(0.0).epsilon(1e-9).scale(kX0));
    CHECK(static_reactance(p, fr) == doctest::Approx(kX0).epsilon(1e-12));

    const Complex z = impedance(p, fr);
    CHECK(z.real() == doctest::Approx(kZreFinger).epsilon(1e-9));
    CHECK(z.imag() == doctest::Approx(kZimFinger).epsilon(1e-9));
    CHECK(std::abs(z) == doctest::Approx(kZabsFinger).epsilon(1e-9));

    const Complex zr = impedance_at_resonance(p);
    CHECK(oracle::rel_err(zr, z) < 1e-9);
    CHECK(oracle::rel_err(transfer_ug_over_i(p, fr), z) < 1e-9);
    CHECK(impedance_magnitude_at_resonance(p) == doctest::Approx(std::abs(zr)).epsilon(1e-12));
}

TEST_CASE("impedance at resonance approaches the bare capacitor as R grows") {
    const auto p = case_30khz(1e12);
    const Complex z = impedance_at_resonance(p);
    CHECK(z.real() == doctest::Approx(0.0).scale(kX0).epsilon(1e-8));
    CHECK(z.imag() == doctest::Approx(-kX0).epsilon(1e-9));
}

TEST_CASE("motional voltage") {
    const auto p = case_30khz(2150.0);
    CHECK(motional_voltage(p, DriveConfig{40.0, 0.0}) == doctest::Approx(40.0).epsilon(1e-15));
    CHECK(motional_voltage(p, DriveConfig{40.0, 100.0}) == doctest::Approx(kUgFinger).epsilon(1e-9));
    for (double r0 : {0.1, 1.0, 10.0, 100.0, 1000.0}) CHECK(motional_voltage(p, DriveConfig{40.0, r0}) < 40.0);
    CHECK_THROWS_AS(motional_voltage(p, DriveConfig{0.0, 100.0}), InvalidProperty);
    CHECK_THROWS_AS(motional_voltage(p, DriveConfig{40.0, -1.0}), InvalidProperty);
}

TEST_CASE("real power") {
    const DriveConfig drive{40.0, 100.0};
    CHECK(real_power(case_30khz(2150.0), drive) == doctest::Approx(kPowerFinger).epsilon(1e-9));
    CHECK(real_power(case_30khz(1250.0), drive) == doctest::Approx(kPowerSpring).epsilon(1e-9));
    CHECK(real_power(case_30khz(2150.0), DriveConfig{40.0, 0.0}) == doctest::Approx(1600.0 / 2150.0).epsilon(1e-15));

    for (double r = 100.0; r <= 10000.0; r *= 1.3) {
        const auto p = case_30khz(r);
        const double ug = motional_voltage(p, drive);
        CHECK(oracle::rel_err(real_power(p, drive), ug * ug / r) < 1e-12);
    }
}

TEST_CASE("real power falls as motional resistance rises") {
    const DriveConfig drive{40.0, 100.0};
    double prev = real_power(case_30khz(100.0), drive);
    for (int i = 1; i < 1000; ++i) {
        const double r = 100.0 + (10000.0 - 100.0) * i / 999.0;
        const double p = real_power(case_30khz(r), drive);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("transfer function near DC is a capacitive block") {
    const auto p = case_30khz(2150.0);
    const double f = 0.1;
    const Complex h = transfer_ug_over_i(p, f);
    const double bound = 1.0 / (2.0 * std::numbers::pi * f * (p.static_capacitance + p.capacitance));
    CHECK(std::abs(h) > 1e7);
    CHECK(std::abs(h) == doctest::Approx(bound).epsilon(1e-3));
}

TEST_CASE("evaluate reports scalar and complex dividers") {
    const auto p = case_30khz(2150.0);
    const auto e = evaluate(p, DriveConfig{40.0, 100.0});
    CHECK(e.frequency == doctest::Approx(30e3).epsilon(1e-12));
    CHECK(e.x0 == doctest::Approx(kX0).epsilon(1e-12));
    CHECK(e.x1 == 0.0);
    CHECK(e.u_g == doctest::Approx(kUgFinger).epsilon(1e-9));
    CHECK(e.delta_p == doctest::Approx(kPowerFinger).epsilon(1e-9));
    CHECK(e.i_g == doctest::Approx(kUgFinger / 2150.0).epsilon(1e-9));
    // The phase-aware divider sees |Z + R0| < |Z| + R0, so it yields a larger motional voltage.
    CHECK(e.u_g_complex_divider > e.u_g);
    CHECK(e.u_g_complex_divider == doctest::Approx(40.0 * kZabsFinger / std::abs(Complex(kZreFinger + 100.0, kZimFinger))));
    CHECK_FALSE(e.velocity.has_value());

    const auto with_gamma = evaluate(p, DriveConfig{40.0, 100.0}, 0.5);
    REQUIRE(with_gamma.velocity.has_value());
    CHECK(*with_gamma.velocity == doctest::Approx(with_gamma.i_g / 0.5));
}

TEST_CASE("peak to RMS") { CHECK(peak_to_rms(40.0) == doctest::Approx(28.284271247461902)); }
