#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tpadlab/circuit.hpp"
#include "tpadlab/error.hpp"

namespace tpadlab::bvdfit {

using circuit::BvdParams;
using circuit::Complex;

struct ImpedancePoint {
    double frequency = 0.0;  // Hz
    Complex impedance;       // Ohm
};

/// Frequency-ordered impedance measurements. Construction enforces strictly
/// increasing frequencies, non-zero magnitudes and at least kMinPoints points.
class ImpedanceSpectrum {
public:
    static constexpr std::size_t kMinPoints = 8;

    explicit ImpedanceSpectrum(std::vector<ImpedancePoint> points);

    [[nodiscard]] std::span<const ImpedancePoint> points() const { return points_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }

private:
    std::vector<ImpedancePoint> points_;
};

struct FitOptions {
    /// Fit C0 as a fourth parameter instead of holding it at the supplied value.
    bool fit_static_capacitance = false;
    /// Fixed resistance in series with the device, e.g. a shunt left in the measurement path.
    double series_resistance = 0.0;
    int max_iterations = 500;
    double step_tolerance = 1e-10;         // relative parameter step
    double improvement_tolerance = 1e-12;  // relative decrease of the objective
    /// Starting point; the spectrum-based estimators are used when absent.
    std::optional<BvdParams> start;
};

struct FitResult {
    BvdParams params;
    double residual_norm = 0.0;  // sqrt of the objective
    int iterations = 0;
    bool converged = false;
};

/// Thrown when the iteration cap is hit or the objective diverges. Carries the
/// best parameters seen.
class FitNotConverged : public AnalysisError {
public:
    FitNotConverged(const std::string& what, FitResult best) : AnalysisError(what), best_(best) {}
    [[nodiscard]] const FitResult& best() const { return best_; }

private:
    FitResult best_;
};

/// Motional parameters from the series/parallel resonance pair:
/// C = C0 ((f_p/f_s)^2 - 1), L = 1 / ((2 pi f_s)^2 C), R = |Z(f_s)|.
BvdParams estimate_from_resonances(double series_frequency, double parallel_frequency,
                                   double magnitude_at_series, double c0);

/// Locates the |Z| minimum and the following maximum and applies
/// estimate_from_resonances. Throws NoResonanceFound when there is no interior minimum.
BvdParams initial_guess(const ImpedanceSpectrum& spectrum, double c0);

/// Estimate that strips the known static branch, Z_m = 1 / (1/Z - j w C0), and
/// regresses w Im(Z_m) = L w^2 - 1/C with weights |1/Z_m|^2. Exact on noise-free data
/// at any damping. Throws NoResonanceFound when the motional resonance is not inside the window.
BvdParams motional_admittance_guess(const ImpedanceSpectrum& spectrum, double c0);

/// Model impedance with an optional fixed series resistance.
Complex model_impedance(const BvdParams& params, double frequency, double series_resistance = 0.0);

/// Sum over points of |log Z_model - log Z_measured|^2.
double residual(const BvdParams& params, std::span<const ImpedancePoint> points, double series_resistance = 0.0);
double residual(const BvdParams& params, const ImpedanceSpectrum& spectrum, double series_resistance = 0.0);

/// Damped Gauss-Newton (Levenberg-Marquardt) fit in log-parameter space.
FitResult fit_bvd(const ImpedanceSpectrum& spectrum, double c0, const FitOptions& options = {});

struct SyntheticSpectrumConfig {
    double f_min = 0.0;  // Hz
    double f_max = 0.0;  // Hz
    std::size_t count = 201;
    /// Standard deviation of the multiplicative circular complex Gaussian noise,
    /// E|n|^2 = noise^2. Zero gives an exact spectrum.
    double noise = 0.0;
    std::uint64_t seed = 1;
    double series_resistance = 0.0;
};

/// Linearly spaced model spectrum Z_i (1 + n_i).
ImpedanceSpectrum synthetic_spectrum(const BvdParams& truth, const SyntheticSpectrumConfig& config);

/// CSV with header `frequency_hz,magnitude_ohm,phase_deg`.
ImpedanceSpectrum parse_impedance_csv(std::string_view text);
ImpedanceSpectrum load_impedance_csv(const std::filesystem::path& path);
void write_impedance_csv(std::ostream& out, const ImpedanceSpectrum& spectrum);

}  // namespace tpadlab::bvdfit
