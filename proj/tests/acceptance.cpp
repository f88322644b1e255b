// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace spdc;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
    Outcome o{false, ""};
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ScenarioSpec preset(const std::string& name) { return load_scenario_file(resolve_scenario_path(name)); }

constexpr double d45 = kPi / 4;

}  // namespace

int main() {
    const SourceConfig bare = oracle::bbo_source();
    const SourceConfig compensated = bare.with_compensator(0.5e-3, Orientation::Compensating);
    const SourceConfig anti = bare.with_compensator(0.5e-3, Orientation::AntiCompensating);
    const double BL = bare.envelope_scale();

    report(1, "projection-oracle equivalence", [&] {
        std::mt19937_64 rng(oracle::kSeed);
        std::uniform_real_distribution<double> theta(-4 * kPi / BL, 4 * kPi / BL), pol(-kPi, kPi);
        std::vector<std::array<double, 3>> inputs(1000);
        for (auto& in : inputs) in = {theta(rng), pol(rng), pol(rng)};
        const auto start = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const auto& [t, a, b] : inputs)
            worst = std::max(worst, std::abs(coincidence_rate(t, {a, b}, bare) - oracle::projection_rate(t, {a, b}, bare)));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return Outcome{worst <= 1e-12 && secs < 1.0, fmt("max |diff| = %.3g (<= 1e-12), runtime %.3g s (< 1 s)", worst, secs)};
    });

    report(2, "envelope anchors", [&] {
        const double s1 = sinc(kPi / 4), s3 = sinc(3 * kPi / 4);
        const auto bell = list_bell_angles(preset("fig2c"), BellState::PsiMinus);
        if (bell.table.rows.size() < 2) return Outcome{false, "fewer than two singlet angles"};
        const double e1 = bell.table.rows[0][2], e2 = bell.table.rows[1][2];
        const bool ok = std::abs(s1 - 0.9003) <= 1e-3 && std::abs(s3 - 0.3001) <= 1e-3 &&
                        std::abs(e1 - 0.9003) <= 1e-3 && std::abs(e2 - 0.3001) <= 1e-3;
        return Outcome{ok, fmt("sinc(pi/4) = %.5f, sinc(3pi/4) = %.5f", s1, s3) +
                               fmt("; fig2c singlet envelopes %.5f, %.5f (+-0.001)", e1, e2)};
    });

    report(3, "singlet angle", [&] {
        const auto spec = preset("fig2a");
        const auto bell = list_bell_angles(spec, BellState::PsiMinus);
        const double t_int = bell.table.rows.at(0)[0], t_ext = bell.table.rows.at(0)[1];
        const double B = transverse_walkoff_B(spec.source.production(), 702e-9, spec.source.production().cut_angle());
        const double expected_int = kPi / (std::abs(B) * spec.source.production().length());
        const double rel = std::abs(t_ext - 0.0055) / 0.0055;
        const bool ok = rel <= 0.2 && std::abs(t_int - expected_int) <= 1e-10;
        return Outcome{ok, fmt("theta_ext = %.6f rad (%.1f%% from 0.0055, <= 20%%), |theta_int - pi/(|B|L)| = %.2g", t_ext,
                               100 * rel, std::abs(t_int - expected_int))};
    });

    report(4, "compensation", [&] {
        const auto spec = preset("fig2b");
        const auto result = run_scenario(spec);
        const Table& pm = result.table("scan_45_m45");
        double worst = 0.0;
        for (const auto& r : pm.rows) worst = std::max(worst, r[4]);
        const double span_int = std::min(std::abs(pm.rows.front()[1]), std::abs(pm.rows.back()[1]));
        const bool three_lobes = span_int >= 4 * kPi / BL;  // sinc² lobes end at |B|Lθ/2 = π, 2π
        double worst_v = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double hw = 2 * kPi / BL * i / 19;
            worst_v = std::max(worst_v, std::abs(visibility({0.0, hw}, spec.source) - 1.0));
        }
        return Outcome{worst < 1e-12 && three_lobes && worst_v <= 1e-9,
                       fmt("max (45,-45) rate = %.3g (< 1e-12) over |theta_int| <= %.4g rad; max |V - 1| = %.3g (<= 1e-9)",
                           worst, span_int, worst_v)};
    });

    report(5, "frequency doubling", [&] {
        auto pp = [](const SourceConfig& c) { return [&c](double t) { return coincidence_rate(t, {d45, d45}, c); }; };
        const double z_bare = oracle::first_zero(pp(bare), 3 * kPi / BL);
        const double z_anti = oracle::first_zero(pp(anti), 3 * kPi / BL);
        const double ratio = z_bare / z_anti;
        return Outcome{std::abs(ratio - 2.0) <= 1e-6,
                       fmt("first zeros %.9g / %.9g rad, ratio = %.9f (2 +- 1e-6)", z_bare, z_anti, ratio)};
    });

    report(6, "visibility decay", [&] {
        bool monotone = true;
        double worst = 0.0, prev = 2.0, v_last = 0.0;
        const double v0 = visibility({0.0, 0.0}, bare);
        for (int i = 0; i < 20; ++i) {
            const double hw = kPi / BL * i / 19;  // up to the first zero of the (45,45) curve
            const double v = visibility({0.0, hw}, bare);
            if (!(v < prev)) monotone = false;
            prev = v_last = v;
            if (hw > 0.0) worst = std::max(worst, std::abs(v - std::abs(oracle::mean_phase_factor(bare, -hw, hw).real())));
        }
        return Outcome{std::abs(v0 - 1.0) <= 1e-12 && monotone && worst <= 1e-6,
                       fmt("V(0) = %.12g, strictly decreasing to V = %.4f, max |V - trapezoid| = %.3g (<= 1e-6)", v0, v_last,
                           worst) + (monotone ? "" : " [not monotone]")};
    });

    report(7, "density-matrix invariants", [&] {
        std::mt19937_64 rng(oracle::kSeed + 7);
        std::uniform_real_distribution<double> len(0.05e-3, 3e-3), center(-0.02, 0.02), hw(0.0, 0.02), theta(-0.05, 0.05);
        std::uniform_int_distribution<int> kind(0, 2);
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const int k = kind(rng);
            const SourceConfig cfg = k == 0 ? bare
                                            : bare.with_compensator(len(rng), k == 1 ? Orientation::Compensating
                                                                                      : Orientation::AntiCompensating);
            const auto rho = aperture_density_matrix({center(rng), hw(rng)}, cfg);
            bool ok = !rho.invariant_violation().has_value();
            for (int r = 0; r < 4; ++r)
                ok = ok && rho(HH, r) == Complex(0.0) && rho(VV, r) == Complex(0.0) && rho(r, HH) == Complex(0.0) &&
                     rho(r, VV) == Complex(0.0);
            if (!ok) ++bad;
        }
        double worst_c = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const SourceConfig& cfg = i % 2 ? anti : bare;
            worst_c = std::max(worst_c, std::abs(concurrence(DensityMatrix4::projector(state_at_angle(theta(rng), cfg))) - 1.0));
        }
        return Outcome{bad == 0 && worst_c <= 1e-10,
                       fmt("%g of 1000 matrices violate invariants; max |C - 1| per angle = %.3g (<= 1e-10)", bad, worst_c)};
    });

    report(8, "dispersion correctness", [&] {
        const UniaxialCrystal& c = bare.production();
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double t = (i + 0.5) / 100 * kPi / 2;
            for (int j = 0; j < 50; ++j) {
                const double l = (0.3 + 0.8 * j / 49) * 1e-6;
                const double h = 1e-6;
                const double fd = (index_extraordinary(c, l, t + h) - index_extraordinary(c, l, t - h)) / (2 * h);
                const double an = index_extraordinary_slope(c, l, t);
                worst = std::max(worst, std::abs(an - fd) / std::abs(an));
            }
        }
        const double cut = phase_matching_cut_angle(c, 351e-9);
        const double residual = std::abs(type2_index_mismatch(c, 351e-9, cut));

        const double omega = 2 * kPi * kSpeedOfLight / 702e-9;
        auto k = [&](bool e) {
            return [&, e](double w) {
                const double l = 2 * kPi * kSpeedOfLight / w;
                return w * (e ? index_extraordinary(c, l, cut) : index_ordinary(c, l)) / kSpeedOfLight;
            };
        };
        const double D_ref = oracle::five_point_derivative(k(true), omega, 1e-4 * omega) -
                             oracle::five_point_derivative(k(false), omega, 1e-4 * omega);
        const double D = group_mismatch_D(c, 702e-9, cut);
        const double d_rel = std::abs(D - D_ref) / std::abs(D_ref);
        const auto lw = longitudinal_walkoff_check(c, D, 1e-9, 702e-9);
        const bool ok = worst <= 1e-6 && residual < 1e-12 && d_rel <= 1e-6 && lw.compensated;
        return Outcome{ok, fmt("dn_e/dtheta rel err %.2g (<= 1e-6); PM residual %.2g (< 1e-12); D rel err %.2g (<= 1e-6)", worst,
                               residual, d_rel) +
                               fmt("; walk-off %.3g s vs coherence %.3g s -> compensated", lw.walkoff_time, lw.coherence_time)};
    });

    report(9, "determinism", [&] {
        int differing = 0, tables = 0;
        for (const char* name : {"fig2a", "fig2b", "fig2c", "fig3"}) {
            const auto spec = preset(name);
            const auto a = run_scenario(spec);
            const auto b = run_scenario(preset(name));
            if (a.tables.size() != b.tables.size()) return Outcome{false, "table count differs"};
            for (std::size_t i = 0; i < a.tables.size(); ++i, ++tables)
                if (to_csv(a.tables[i]) != to_csv(b.tables[i])) ++differing;
        }
        return Outcome{differing == 0, fmt("%g of %g tables differ between identical runs", differing, tables)};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
