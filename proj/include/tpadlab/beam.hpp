#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpadlab/materials.hpp"

namespace tpadlab::beam {

struct BeamGeometry {
    double width = 1.0;  // l_w, m
};

struct Wavenumbers {
    double sandwich = 0.0;  // beta_a, bonded actuator+glass region, 1/m
    double plate = 0.0;     // beta_p, bare glass region, 1/m
};

struct AmplificationResult {
    double d1_prime = 0.0;      // sandwich flexural stiffness per unit width, Pa m^3
    double d2_per_width = 0.0;  // plate flexural stiffness per unit width, Pa m^3
    double beta_a = 0.0;        // at reference_angular_frequency, 1/m
    double beta_p = 0.0;        // at reference_angular_frequency, 1/m
    double n = 0.0;             // plate-to-actuator deflection ratio

    [[nodiscard]] double n_squared() const { return n * n; }
};

/// Angular frequency at which AmplificationResult reports its wavenumbers (2 pi * 30 kHz).
double reference_angular_frequency();

/// D1 = E_p l_w h_p^3 / 3 + E_a l_w (h_a^3 / 3 + h_p h_a^2 + h_p^2 h_a), Pa m^4.
double flexural_stiffness_sandwich(const GlassSpec& glass, const ActuatorSpec& actuator,
                                   const BeamGeometry& geom = {});

/// D2 = E_p l_w h_p^3 / 12, Pa m^4.
double flexural_stiffness_plate(const GlassSpec& glass, const BeamGeometry& geom = {});

/// Euler-Bernoulli wavenumbers (mu w^2 / D)^(1/4) of the sandwich and bare-plate regions.
Wavenumbers wavenumbers(const GlassSpec& glass, const ActuatorSpec& actuator, const BeamGeometry& geom,
                        double angular_frequency);

/// n from the shear-force balance at the junction, evaluated through explicit
/// stiffnesses and wavenumbers: n = 12 D1 / (E_p h_p^3 l_w) (beta_a / beta_p)^3.
double amplification_from_wavenumbers(const GlassSpec& glass, const ActuatorSpec& actuator,
                                      const BeamGeometry& geom, double angular_frequency);

/// n from the width- and frequency-free closed form
/// n = 12 [ (1/12) (D1'/E_p)^(1/3) (rho_a h_a / (h_p^2 rho_p) + 1/h_p) ]^(3/4).
AmplificationResult amplification_number(const GlassSpec& glass, const ActuatorSpec& actuator);

/// Predicted Delta P_other / Delta P_reference = n_reference^2 / n_other^2.
/// Valid only while the reflected plate impedance dominates the actuator's own.
double power_ratio(const GlassSpec& reference, const GlassSpec& other, const ActuatorSpec& actuator);

enum class SweepAxis { Thickness, Density, YoungsModulus };

std::optional<SweepAxis> parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
    double axis_value = 0.0;  // SI units of the swept property
    double n = 0.0;
    double n_squared = 0.0;
};

/// Evaluates n^2 with one property of `base` replaced by each grid value (SI).
/// Throws EmptyGrid for an empty grid and InvalidProperty for non-positive or unsorted values.
std::vector<SweepRow> sweep_amplification(const GlassSpec& base, const ActuatorSpec& actuator, SweepAxis axis,
                                          std::span<const double> grid);

struct PowerPrediction {
    std::string name;
    double n_squared = 0.0;
    double predicted_power_ratio = 0.0;  // relative to the reference design
};

std::vector<PowerPrediction> predict_power(std::span<const GlassSpec> designs, const GlassSpec& reference,
                                           const ActuatorSpec& actuator);

/// CSV header `axis_value,n,n_squared`.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// CSV header `name,n_squared,predicted_power_ratio`.
void write_prediction_csv(std::ostream& out, std::span<const PowerPrediction> rows);

}  // namespace tpadlab::beam
