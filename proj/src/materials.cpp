#include "tpadlab/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "tpadlab/error.hpp"

namespace tpadlab {

namespace {

void require_positive(double value, const char* field, const std::string& owner) {
    if (!std::isfinite(value) || value <= 0.0) {
        std::ostringstream msg;
        msg << owner << ": " << field << " must be positive and finite (got " << value << ")";
        throw InvalidProperty(msg.str());
    }
}

GlassSpec table_entry(const char* name, double thickness_mm, double density_g_cm3, double modulus_kn_mm2) {
    return GlassSpec{name, thickness_mm * 1e-3, density_g_cm3 * 1e3, modulus_kn_mm2 * 1e9};
}

const std::set<std::string>& material_keys() {
    static const std::set<std::string> keys{"name", "thickness_m", "density_kg_m3", "youngs_modulus_pa"};
    return keys;
}

}  // namespace

void validate(const GlassSpec& glass) {
    const std::string owner = glass.name.empty() ? std::string("glass") : glass.name;
    require_positive(glass.thickness, "thickness", owner);
    require_positive(glass.density, "density", owner);
    require_positive(glass.youngs_modulus, "youngs_modulus", owner);
}

void validate(const ActuatorSpec& actuator) {
    require_positive(actuator.thickness, "thickness", "actuator");
    require_positive(actuator.density, "density", "actuator");
    require_positive(actuator.youngs_modulus, "youngs_modulus", "actuator");
    require_positive(actuator.static_capacitance, "static_capacitance", "actuator");
    if (actuator.coupling) require_positive(*actuator.coupling, "coupling", "actuator");
}

void validate_library_entry(const GlassSpec& glass) {
    validate(glass);
    if (glass.thickness < 1e-4 || glass.thickness > 5e-3) {
        throw InvalidProperty(glass.name + ": library thickness must lie in [0.1, 5] mm");
    }
}

ActuatorSpec default_actuator() {
    return ActuatorSpec{0.3e-3, 7900.0, 84e9, 9.88e-9, std::nullopt};
}

std::vector<TpadDesign> builtin_library() {
    const ActuatorSpec actuator = default_actuator();
    const GlassSpec glasses[] = {
        table_entry("SLG_0.4", 0.4, 2.483, 71.0),
        table_entry("SLG_0.56", 0.56, 2.483, 71.0),
        table_entry("SLG_0.7", 0.7, 2.483, 71.0),
        table_entry("D263_0.4", 0.4, 2.51, 72.9),
        table_entry("D263_0.56", 0.56, 2.51, 72.9),
        table_entry("Gorilla_0.56", 0.56, 2.42, 71.5),
        table_entry("Gorilla_0.8", 0.8, 2.42, 71.5),
        table_entry("BoroFloat_0.7", 0.7, 2.2, 64.0),
    };
    std::vector<TpadDesign> library;
    library.reserve(std::size(glasses));
    for (const auto& glass : glasses) library.push_back(TpadDesign{glass, actuator, std::nullopt});
    return library;
}

std::optional<TpadDesign> find_builtin(std::string_view name) {
    for (auto& design : builtin_library()) {
        if (design.glass.name == name) return design;
    }
    return std::nullopt;
}

std::vector<GlassSpec> parse_material_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedMaterialFile(std::string("material file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw MalformedMaterialFile("material file must be a top-level JSON array");

    std::vector<GlassSpec> out;
    out.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        const std::string where = "record " + std::to_string(i);
        if (!rec.is_object()) throw MalformedMaterialFile(where + " is not an object");
        for (const auto& item : rec.items()) {
            if (!material_keys().count(item.key())) {
                throw MalformedMaterialFile(where + ": unknown key \"" + item.key() + "\"");
            }
        }
        for (const auto& key : material_keys()) {
            if (!rec.contains(key)) throw MalformedMaterialFile(where + ": missing key \"" + key + "\"");
        }
        if (!rec["name"].is_string()) throw MalformedMaterialFile(where + ": name must be a string");
        for (const char* key : {"thickness_m", "density_kg_m3", "youngs_modulus_pa"}) {
            if (!rec[key].is_number()) throw MalformedMaterialFile(where + ": " + key + " must be a number");
        }
        GlassSpec glass{rec["name"].get<std::string>(), rec["thickness_m"].get<double>(),
                        rec["density_kg_m3"].get<double>(), rec["youngs_modulus_pa"].get<double>()};
        validate(glass);
        out.push_back(std::move(glass));
    }
    return out;
}

std::vector<GlassSpec> load_material_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedMaterialFile("cannot open material file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_material_json(buf.str());
}

std::string to_material_json(const std::vector<GlassSpec>& glasses) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& g : glasses) {
        doc.push_back({{"name", g.name},
                       {"thickness_m", g.thickness},
                       {"density_kg_m3", g.density},
                       {"youngs_modulus_pa", g.youngs_modulus}});
    }
    return doc.dump(2);
}

MaterialCatalog::MaterialCatalog() {
    for (const auto& design : builtin_library()) glasses_.push_back(design.glass);
}

void MaterialCatalog::add(const GlassSpec& glass) {
    validate(glass);
    auto it = std::find_if(glasses_.begin(), glasses_.end(),
                           [&](const GlassSpec& g) { return g.name == glass.name; });
    if (it != glasses_.end()) {
        *it = glass;
    } else {
        glasses_.push_back(glass);
    }
}

void MaterialCatalog::add_all(const std::vector<GlassSpec>& glasses) {
    for (const auto& g : glasses) add(g);
}

std::optional<GlassSpec> MaterialCatalog::find(std::string_view name) const {
    for (const auto& g : glasses_) {
        if (g.name == name) return g;
    }
    return std::nullopt;
}

}  // namespace tpadlab
