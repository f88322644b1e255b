#pragma once

// Scenario files and their execution.
//
// A scenario is a key = value file (see keyvalue.hpp) with these sections:
//
//   name = fig2a                 # top level; also seed, materials_file
//   [source]                     material, pump_wavelength_nm, length_mm, cut_angle_deg (optional)
//   [compensator.<tag>]          length_mm, orientation, material, cut_angle_deg (all but the
//                                first two optional); repeatable, applied in file order
//   [geometry]                   focal_length_mm, pinhole_diameter_mm, pinhole_offset_mm, ambient_index
//   [settings]                   pairs = 45/45, 45/-45   (Glan prism angles in degrees)
//   [scan]                       min_mrad, max_mrad, points   (external angles)
//   [window_sweep]               halfwidth_min_mrad, halfwidth_max_mrad, points, include_uncompensated
//   [counts]                     peak_rate_hz, accidental_rate_hz, duration_s
//   [bell]                       max_order
//
// Lab-side quantities (scan angles, window halfwidths) are external angles;
// they are mapped to internal angles before any physics is evaluated.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spdc/biphoton_state.hpp"
#include "spdc/geometry.hpp"
#include "spdc/keyvalue.hpp"
#include "spdc/materials.hpp"
#include "spdc/measurement.hpp"
#include "spdc/table.hpp"

namespace spdc {

struct ScanGrid {
    double min_ext = 0.0;  // rad
    double max_ext = 0.0;  // rad
    int points = 1;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            v[static_cast<std::size_t>(i)] =
                points == 1 ? min_ext : min_ext + (max_ext - min_ext) * i / (points - 1);
        return v;
    }
};

struct WindowSweep {
    double halfwidth_min_ext = 0.0;  // rad
    double halfwidth_max_ext = 0.0;  // rad
    int points = 1;
    bool include_uncompensated = false;
};

struct CountSimulation {
    double peak_rate = 0.0;        // s⁻¹ at unit normalized rate
    double accidental_rate = 0.0;  // s⁻¹
    double duration = 0.0;         // s
};

struct ScenarioSpec {
    std::string name;
    SourceConfig source;
    GeometryConfig geometry;
    std::vector<PolarizerSettings> settings;
    std::optional<ScanGrid> scan;
    std::optional<WindowSweep> window_sweep;
    std::optional<CountSimulation> counts;
    int bell_max_order = 4;
    std::uint64_t seed = 0;

    double external_to_internal(double theta_ext) const {
        return external_to_internal_angle(theta_ext, geometry, source.production(),
                                          source.degenerate_wavelength());
    }
    double internal_to_external(double theta_int) const {
        return internal_to_external_angle(theta_int, geometry, source.production(),
                                          source.degenerate_wavelength());
    }
};

namespace detail {

inline Orientation parse_orientation(const kv::Section& s) {
    const kv::Entry* e = s.find("orientation");
    if (!e) throw ConfigError("missing key 'orientation' in [" + s.name + "]", s.line);
    if (e->value == "compensating") return Orientation::Compensating;
    if (e->value == "anti-compensating" || e->value == "anticompensating")
        return Orientation::AntiCompensating;
    throw ConfigError("orientation must be 'compensating' or 'anti-compensating'", e->line);
}

inline std::vector<PolarizerSettings> parse_pairs(const kv::Section& s) {
    const kv::Entry* e = s.find("pairs");
    if (!e) throw ConfigError("missing key 'pairs' in [settings]", s.line);
    std::vector<PolarizerSettings> out;
    std::string_view rest = e->value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = kv::trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto slash = item.find('/');
        if (slash == std::string_view::npos)
            throw ConfigError("settings pair must look like '45/-45', got '" + std::string(item) + "'",
                              e->line);
        const double a = kv::Section::parse_double({"pairs", std::string(kv::trim(item.substr(0, slash))), e->line});
        const double b = kv::Section::parse_double({"pairs", std::string(kv::trim(item.substr(slash + 1))), e->line});
        out.push_back({a * units::deg, b * units::deg});
    }
    if (out.empty()) throw ConfigError("no settings pairs given", e->line);
    return out;
}

inline int positive_points(const kv::Section& s) {
    const long long n = s.get_int("points", 0);
    if (n < 1 || n > 10'000'000) {
        const kv::Entry* e = s.find("points");
        throw ConfigError("'points' must be a positive integer", e ? e->line : s.line);
    }
    return static_cast<int>(n);
}

}  // namespace detail

/// Builds a scenario from a parsed document. Any semantic problem is reported as
/// a ConfigError carrying the offending line.
inline ScenarioSpec load_scenario(const kv::Document& doc, MaterialLibrary materials,
                                  const std::filesystem::path& base_dir = {}) {
    const kv::Section& root = doc.root();
    root.require_known({"name", "seed", "materials_file"});
    if (const kv::Entry* mf = root.find("materials_file")) {
        try {
            materials.merge_file((base_dir / mf->value).string());
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("materials file '") + mf->value + "': " + e.what(), mf->line);
        }
    }

    auto resolve_material = [&](const kv::Section& s, const std::string& fallback) -> const Material& {
        const std::string name = s.get_string("material", fallback);
        if (!materials.contains(name)) {
            const kv::Entry* e = s.find("material");
            throw ConfigError("unknown material '" + name + "'", e ? e->line : s.line);
        }
        return materials.get(name);
    };
    auto wrap = [](const kv::Section& s, auto&& build) {
        try {
            return build();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("[") + s.name + "]: " + e.what(), s.line);
        }
    };

    const kv::Section* src = doc.find("source");
    if (!src) throw ConfigError("missing [source] section");
    src->require_known({"material", "pump_wavelength_nm", "length_mm", "cut_angle_deg"});
    const Material& prod_material = resolve_material(*src, "bbo");
    const double pump = src->get_double("pump_wavelength_nm") * units::nm;
    const double length = src->get_double("length_mm") * units::mm;

    SourceConfig base = wrap(*src, [&] {
        if (const kv::Entry* cut = src->find("cut_angle_deg")) {
            const double angle = kv::Section::parse_double(*cut) * units::deg;
            return SourceConfig(UniaxialCrystal(prod_material, angle, length), pump);
        }
        return SourceConfig::phase_matched(prod_material, length, pump);
    });

    std::vector<CompensatorPlacement> comps;
    for (const kv::Section& s : doc.sections) {
        if (s.name != "compensator" && s.name.rfind("compensator.", 0) != 0) continue;
        s.require_known({"material", "length_mm", "orientation", "cut_angle_deg"});
        const Material& m = resolve_material(s, prod_material.name);
        const Orientation o = detail::parse_orientation(s);
        const double len = s.get_double("length_mm") * units::mm;
        const double cut = s.find("cut_angle_deg") ? s.get_double("cut_angle_deg") * units::deg
                                                   : base.production().cut_angle();
        comps.push_back(wrap(s, [&] { return CompensatorPlacement{UniaxialCrystal(m, cut, len), o}; }));
    }
    SourceConfig source = wrap(*src, [&] {
        return SourceConfig(base.production(), base.pump_wavelength(), std::move(comps));
    });

    GeometryConfig geometry;
    if (const kv::Section* g = doc.find("geometry")) {
        g->require_known({"focal_length_mm", "pinhole_diameter_mm", "pinhole_offset_mm", "ambient_index"});
        geometry.lens_focal_length = g->get_double("focal_length_mm", 500.0) * units::mm;
        geometry.pinhole_diameter = g->get_double("pinhole_diameter_mm", 0.0) * units::mm;
        geometry.pinhole_offset = g->get_double("pinhole_offset_mm", 0.0) * units::mm;
        geometry.ambient_index = g->get_double("ambient_index", 1.0);
        wrap(*g, [&] {
            geometry.validate();
            return pinhole_to_external_angle(geometry.pinhole_offset, geometry);
        });
    }

    ScenarioSpec spec{root.get_string("name", "scenario"), std::move(source), geometry, {}, {}, {}, {}, 4,
                      static_cast<std::uint64_t>(root.get_int("seed", 0))};

    if (const kv::Section* s = doc.find("settings")) {
        s->require_known({"pairs"});
        spec.settings = detail::parse_pairs(*s);
    } else {
        spec.settings = {kSettingsPlusPlus, kSettingsPlusMinus};
    }

    if (const kv::Section* s = doc.find("scan")) {
        s->require_known({"min_mrad", "max_mrad", "points"});
        ScanGrid grid{s->get_double("min_mrad") * units::mrad, s->get_double("max_mrad") * units::mrad,
                      detail::positive_points(*s)};
        if (grid.points > 1 && !(grid.max_ext > grid.min_ext))
            throw ConfigError("[scan] max_mrad must exceed min_mrad", s->line);
        spec.scan = grid;
    }

    if (const kv::Section* s = doc.find("window_sweep")) {
        s->require_known({"halfwidth_min_mrad", "halfwidth_max_mrad", "points", "include_uncompensated"});
        WindowSweep sweep{s->get_double("halfwidth_min_mrad", 0.0) * units::mrad,
                          s->get_double("halfwidth_max_mrad") * units::mrad, detail::positive_points(*s),
                          s->get_bool("include_uncompensated", false)};
        if (sweep.halfwidth_min_ext < 0.0 || sweep.halfwidth_max_ext < sweep.halfwidth_min_ext)
            throw ConfigError("[window_sweep] needs 0 <= halfwidth_min_mrad <= halfwidth_max_mrad", s->line);
        spec.window_sweep = sweep;
    }

    if (const kv::Section* s = doc.find("counts")) {
        s->require_known({"peak_rate_hz", "accidental_rate_hz", "duration_s"});
        CountSimulation c{s->get_double("peak_rate_hz"), s->get_double("accidental_rate_hz", 0.0),
                          s->get_double("duration_s")};
        if (c.peak_rate < 0.0 || c.accidental_rate < 0.0 || c.duration < 0.0)
            throw ConfigError("[counts] values must be non-negative", s->line);
        spec.counts = c;
    }

    if (const kv::Section* s = doc.find("bell")) {
        s->require_known({"max_order"});
        const long long order = s->get_int("max_order", 4);
        if (order < 1) throw ConfigError("[bell] max_order must be >= 1", s->line);
        spec.bell_max_order = static_cast<int>(order);
    }

    for (const kv::Section& s : doc.sections) {
        static constexpr std::string_view known[] = {"",     "source",       "geometry", "settings",
                                                     "scan", "window_sweep", "counts",   "bell"};
        const bool is_comp = s.name == "compensator" || s.name.rfind("compensator.", 0) == 0;
        if (!is_comp && std::find(std::begin(known), std::end(known), s.name) == std::end(known))
            throw ConfigError("unknown section [" + s.name + "]", s.line);
    }
    return spec;
}

inline ScenarioSpec load_scenario_file(const std::filesystem::path& path,
                                       MaterialLibrary materials = MaterialLibrary::builtin()) {
    return load_scenario(kv::parse_file(path.string()), std::move(materials), path.parent_path());
}

/// Accepts either a path to a scenario file or the name of a bundled preset.
inline std::filesystem::path resolve_scenario_path(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
#ifdef SPDC_PRESET_DIR
    const fs::path preset = fs::path(SPDC_PRESET_DIR) / (arg + ".ini");
    if (fs::exists(preset)) return preset;
#endif
    throw ConfigError("no scenario file or preset named '" + arg + "'");
}

inline std::string settings_label(const PolarizerSettings& s) {
    auto deg = [](double rad) {
        const double d = std::round(rad / units::deg * 1e6) / 1e6;
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d == 0.0 ? 0.0 : d);
        std::string out(buf, ptr);
        if (!out.empty() && out.front() == '-') out.front() = 'm';
        for (char& ch : out)
            if (ch == '.') ch = 'p';
        return out;
    };
    return deg(s.theta1) + "_" + deg(s.theta2);
}

/// Rate seen through a pinhole of angular half-width `half_int` (internal):
/// two-point Gauss average across the opening.
inline double pinhole_rate(double theta, double half_int, const PolarizerSettings& s,
                           const SourceConfig& config) {
    if (half_int == 0.0) return coincidence_rate(theta, s, config);
    const double node = half_int / std::sqrt(3.0);
    return 0.5 * (coincidence_rate(theta - node, s, config) + coincidence_rate(theta + node, s, config));
}

inline Table scan_table(const ScenarioSpec& spec, const PolarizerSettings& settings) {
    Table t{"scan_" + settings_label(settings),
            {"theta_ext_rad", "theta_int_rad", "envelope", "phase_rad", "rate"},
            {}};
    const double half_int = spec.external_to_internal(
        0.5 * spec.geometry.pinhole_diameter / spec.geometry.lens_focal_length);
    std::vector<double> internal;
    const std::vector<double> external = spec.scan->values();
    for (double e : external) internal.push_back(spec.external_to_internal(e));
    const AngularScan s = scan(settings, spec.source, internal);
    for (std::size_t i = 0; i < external.size(); ++i) {
        const ScanPoint& p = s.points[i];
        t.rows.push_back({external[i], p.theta, p.envelope, p.phase,
                          pinhole_rate(p.theta, half_int, settings, spec.source)});
    }
    return t;
}

inline Table visibility_table(const ScenarioSpec& spec, const SourceConfig& config, std::string name) {
    Table t{std::move(name), {"halfwidth_ext_rad", "c_pp", "c_pm", "visibility", "concurrence"}, {}};
    const WindowSweep& w = *spec.window_sweep;
    const double center = spec.external_to_internal(
        pinhole_to_external_angle(spec.geometry.pinhole_offset, spec.geometry));
    for (int i = 0; i < w.points; ++i) {
        const double hw_ext =
            w.points == 1 ? w.halfwidth_min_ext
                          : w.halfwidth_min_ext + (w.halfwidth_max_ext - w.halfwidth_min_ext) * i / (w.points - 1);
        const AngularWindow window{center, spec.external_to_internal(hw_ext)};
        const VisibilityResult v = visibility_counts(window, config);
        const double c = concurrence(aperture_density_matrix(window, config));
        t.rows.push_back({hw_ext, v.c_pp, v.c_pm, v.visibility, c});
    }
    return t;
}

/// Poisson counts along the scan, one independent stream per (table, point).
inline Table counts_table(const ScenarioSpec& spec, const Table& scan, std::size_t stream) {
    Table t{"counts_" + scan.name.substr(5), {"theta_ext_rad", "mean_counts", "counts"}, {}};
    const CountSimulation& c = *spec.counts;
    const std::size_t rate_col = scan.column("rate");
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(i)};
        std::uint32_t raw[2];
        seq.generate(std::begin(raw), std::end(raw));
        const std::uint64_t point_seed = (std::uint64_t{raw[0]} << 32) | raw[1];
        const CountRecord rec =
            simulate_counts(c.peak_rate * scan.rows[i][rate_col], c.accidental_rate, c.duration, point_seed);
        t.rows.push_back({scan.rows[i][0], rec.mean(), static_cast<double>(rec.counts)});
    }
    return t;
}

struct ScenarioResult {
    std::string scenario;
    std::vector<Table> tables;

    const Table& table(const std::string& name) const {
        for (const auto& t : tables)
            if (t.name == name) return t;
        throw std::out_of_range("no table '" + name + "'");
    }
};

/// Runs every configured part of the scenario. Table order is fixed: scans (in
/// settings order), then counts, then visibility sweeps.
inline ScenarioResult run_scenario(const ScenarioSpec& spec) {
    ScenarioResult r{spec.name, {}};
    if (spec.scan) {
        for (const auto& s : spec.settings) r.tables.push_back(scan_table(spec, s));
        if (spec.counts) {
            const std::size_t n = r.tables.size();
            for (std::size_t i = 0; i < n; ++i) r.tables.push_back(counts_table(spec, r.tables[i], i));
        }
    }
    if (spec.window_sweep) {
        r.tables.push_back(visibility_table(spec, spec.source, "visibility"));
        if (spec.window_sweep->include_uncompensated && !spec.source.compensators().empty())
            r.tables.push_back(
                visibility_table(spec, spec.source.without_compensators(), "visibility_uncompensated"));
    }
    return r;
}

struct BellAngleTable {
    Table table;
    std::string notice;  // non-empty when the state is uniform
};

inline BellAngleTable list_bell_angles(const ScenarioSpec& spec, BellState which) {
    BellAngleTable out{{which == BellState::PsiPlus ? "bell_psi_plus" : "bell_psi_minus",
                        {"theta_int_rad", "theta_ext_rad", "envelope"},
                        {}},
                       {}};
    try {
        const BellAngles angles = bell_angles(spec.source, which, spec.bell_max_order);
        if (angles.uniform) out.notice = "uniform state: Psi+ over the whole line-shape";
        for (const auto& a : angles.angles)
            out.table.rows.push_back({a.theta, spec.internal_to_external(a.theta), a.envelope});
    } catch (const UniformStateError& e) {
        out.notice = std::string("uniform state: ") + e.what();
    }
    return out;
}

}  // namespace spdc
