#pragma once

namespace tpadlab::friction {

struct VibrationState {
    double frequency = 0.0;  // Hz
    double amplitude = 0.0;  // m
};

/// Constants of the velocity-based friction reduction model.
struct FrictionParams {
    double explore_velocity = 0.05;  // finger sliding speed, m/s
    double mu0 = 0.25;               // friction coefficient without vibration
    double poisson = 0.33;           // Poisson ratio of the fingertip
    double psi_star = 4.69;          // characteristic value of psi
};

/// Constants of the squeeze-film model. No defaults exist for the gap or the
/// pressing pressure; only atmospheric pressure is pre-filled.
struct SqueezeFilmParams {
    double p0 = 101325.0;  // atmospheric pressure, Pa
    double u0 = 0.0;       // gap at rest, m
    double ps = 0.0;       // pressing pressure, Pa
};

void validate(const VibrationState& vib);
void validate(const FrictionParams& params);
void validate(const SqueezeFilmParams& params);

/// psi = U / (f * alpha * mu0 * (1 + nu)). Throws DegenerateAmplitude when alpha == 0.
double psi(const VibrationState& vib, const FrictionParams& params = {});

/// Relative friction mu' = 1 - exp(-psi / psi*) of the velocity model; 1 when alpha == 0.
double relative_friction_velocity(const VibrationState& vib, const FrictionParams& params = {});

/// Relative friction mu' = exp(-5 alpha^2 p0 / (4 u0^2 ps)) of the squeeze-film model.
double relative_friction_squeeze(double amplitude, const SqueezeFilmParams& params);

inline constexpr double kContourMinFrequency = 16e3;
inline constexpr double kContourMaxFrequency = 160e3;

/// Amplitude (um) on the iso-friction contour alpha = 1.755e4 f^-0.797 - 0.937,
/// f in Hz. Throws OutOfContourRange outside [16, 160] kHz.
double contour_amplitude(double frequency);

}  // namespace tpadlab::friction
