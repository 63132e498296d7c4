#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tpadlab {

// All quantities are stored in SI units (m, kg/m^3, Pa, F).

struct GlassSpec {
    std::string name;
    double thickness = 0.0;       // m
    double density = 0.0;         // kg/m^3
    double youngs_modulus = 0.0;  // Pa

    bool operator==(const GlassSpec&) const = default;
};

struct ActuatorSpec {
    double thickness = 0.0;           // m
    double density = 0.0;             // kg/m^3
    double youngs_modulus = 0.0;      // Pa
    double static_capacitance = 0.0;  // F
    /// Electromechanical coupling in N/V. Not known for the stock actuator.
    std::optional<double> coupling;

    bool operator==(const ActuatorSpec&) const = default;
};

/// One library entry: a glass plate bonded to an actuator.
struct TpadDesign {
    GlassSpec glass;
    ActuatorSpec actuator;
    /// Resonant drive frequency in Hz, when known.
    std::optional<double> excitation_frequency;

    bool operator==(const TpadDesign&) const = default;
};

/// Throws InvalidProperty when a field is non-positive or non-finite.
void validate(const GlassSpec& glass);
void validate(const ActuatorSpec& actuator);

/// Library entries must also have a thickness in [0.1, 5] mm.
void validate_library_entry(const GlassSpec& glass);

/// The piezo actuator bonded to every stock plate: 0.3 mm, 7900 kg/m^3, 84 GPa, 9.88 nF.
ActuatorSpec default_actuator();

/// The eight stock glass plates, each with the default actuator attached.
std::vector<TpadDesign> builtin_library();

/// Looks up a stock design by name (e.g. "SLG_0.4").
std::optional<TpadDesign> find_builtin(std::string_view name);

/// Parses a JSON array of {"name", "thickness_m", "density_kg_m3", "youngs_modulus_pa"}.
/// Throws MalformedMaterialFile on syntax or schema problems and InvalidProperty
/// on non-positive values.
std::vector<GlassSpec> parse_material_json(std::string_view text);
std::vector<GlassSpec> load_material_file(const std::filesystem::path& path);

std::string to_material_json(const std::vector<GlassSpec>& glasses);

/// Name lookup over the stock library plus any extra records. Extra records
/// shadow stock entries of the same name.
class MaterialCatalog {
public:
    MaterialCatalog();

    void add(const GlassSpec& glass);
    void add_all(const std::vector<GlassSpec>& glasses);

    [[nodiscard]] std::optional<GlassSpec> find(std::string_view name) const;
    [[nodiscard]] const std::vector<GlassSpec>& glasses() const { return glasses_; }

private:
    std::vector<GlassSpec> glasses_;
};

}  // namespace tpadlab
