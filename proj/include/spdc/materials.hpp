#pragma once

// Material records in key = value form, one `[name]` section per material:
//
//   [bbo]
//   ordinary.a = 2.7405        # n² = a + b/(λ² − c) − d·λ², λ in µm
//   ordinary.b = 0.0184
//   ordinary.c = 0.0179
//   ordinary.d = 0.0155
//   extraordinary.a = 2.3730   # principal extraordinary index
//   ...
//   band_min_nm = 300
//   band_max_nm = 1100

#include <map>
#include <string>
#include <vector>

#include "spdc/crystal_optics.hpp"
#include "spdc/keyvalue.hpp"

namespace spdc {

inline constexpr const char* kBuiltinMaterials = R"(
[bbo]
ordinary.a = 2.7405
ordinary.b = 0.0184
ordinary.c = 0.0179
ordinary.d = 0.0155
extraordinary.a = 2.3730
extraordinary.b = 0.0128
extraordinary.c = 0.0156
extraordinary.d = 0.0044
band_min_nm = 300
band_max_nm = 1100
)";

class MaterialLibrary {
public:
    static MaterialLibrary from_document(const kv::Document& doc) {
        MaterialLibrary lib;
        lib.merge(doc);
        return lib;
    }

    static MaterialLibrary builtin() { return from_document(kv::parse_string(kBuiltinMaterials)); }

    /// Adds (or replaces) every record in `doc`.
    void merge(const kv::Document& doc) {
        if (!doc.root().entries.empty())
            throw ConfigError("material file: key outside of a [material] section",
                              doc.root().entries.front().line);
        for (std::size_t i = 1; i < doc.sections.size(); ++i) {
            const kv::Section& s = doc.sections[i];
            s.require_known({"ordinary.a", "ordinary.b", "ordinary.c", "ordinary.d",
                             "extraordinary.a", "extraordinary.b", "extraordinary.c",
                             "extraordinary.d", "band_min_nm", "band_max_nm"});
            Material m;
            m.name = s.name;
            m.ordinary = {s.get_double("ordinary.a"), s.get_double("ordinary.b"),
                          s.get_double("ordinary.c"), s.get_double("ordinary.d")};
            m.extraordinary = {s.get_double("extraordinary.a"), s.get_double("extraordinary.b"),
                               s.get_double("extraordinary.c"), s.get_double("extraordinary.d")};
            m.band_min = s.get_double("band_min_nm") * units::nm;
            m.band_max = s.get_double("band_max_nm") * units::nm;
            try {
                m.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what(), s.line);
            }
            materials_[m.name] = std::move(m);
        }
    }

    void merge_file(const std::string& path) { merge(kv::parse_file(path)); }

    bool contains(const std::string& name) const { return materials_.count(name) != 0; }

    const Material& get(const std::string& name) const {
        auto it = materials_.find(name);
        if (it == materials_.end()) throw ConfigError("unknown material '" + name + "'");
        return it->second;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [name, _] : materials_) out.push_back(name);
        return out;
    }

private:
    std::map<std::string, Material> materials_;
};

inline Material builtin_bbo() { return MaterialLibrary::builtin().get("bbo"); }

}  // namespace spdc
