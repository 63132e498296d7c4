#include "tpadlab/friction.hpp"

#include <cmath>
#include <sstream>

#include "tpadlab/error.hpp"

namespace tpadlab::friction {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidProperty(what);
}

}  // namespace

void validate(const VibrationState& vib) {
    require(std::isfinite(vib.frequency) && vib.frequency > 0.0, "vibration frequency must be positive");
    require(std::isfinite(vib.amplitude) && vib.amplitude >= 0.0, "vibration amplitude must be non-negative");
}

void validate(const FrictionParams& p) {
    require(p.explore_velocity > 0.0, "exploration velocity must be positive");
    require(p.mu0 > 0.0, "mu0 must be positive");
    require(p.poisson > 0.0 && p.poisson < 0.5, "Poisson ratio must lie in (0, 0.5)");
    require(p.psi_star > 0.0, "psi* must be positive");
}

void validate(const SqueezeFilmParams& p) {
    require(p.p0 > 0.0, "atmospheric pressure must be positive");
    require(p.u0 > 0.0, "gap at rest must be positive");
    require(p.ps > 0.0, "pressing pressure must be positive");
}

double psi(const VibrationState& vib, const FrictionParams& params) {
    validate(vib);
    validate(params);
    if (vib.amplitude == 0.0) throw DegenerateAmplitude("psi is undefined at zero vibration amplitude");
    return params.explore_velocity / (vib.frequency * vib.amplitude * params.mu0 * (1.0 + params.poisson));
}

double relative_friction_velocity(const VibrationState& vib, const FrictionParams& params) {
    validate(vib);
    validate(params);
    if (vib.amplitude == 0.0) return 1.0;
    return -std::expm1(-psi(vib, params) / params.psi_star);
}

double relative_friction_squeeze(double amplitude, const SqueezeFilmParams& params) {
    validate(params);
    require(std::isfinite(amplitude) && amplitude >= 0.0, "vibration amplitude must be non-negative");
    const double exponent = 5.0 * amplitude * amplitude * params.p0 / (4.0 * params.u0 * params.u0 * params.ps);
    return std::exp(-exponent);
}

double contour_amplitude(double frequency) {
    if (!(frequency >= kContourMinFrequency && frequency <= kContourMaxFrequency)) {
        std::ostringstream msg;
        msg << "frequency " << frequency << " Hz is outside the contour range [16e3, 160e3] Hz";
        throw OutOfContourRange(msg.str());
    }
    return 1.755e4 * std::pow(frequency, -0.797) - 0.937;
}

}  // namespace tpadlab::friction
