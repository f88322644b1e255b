#pragma once

// Dispersion and phase matching for negative uniaxial crystals.
//
// All quantities are SI: wavelengths and lengths in meters, angles in radians.
// Sellmeier coefficients follow the common convention with wavelength in µm:
//
//   n²(λ) = a + b / (λ² − c) − d·λ²

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spdc/root_finding.hpp"
#include "spdc/units.hpp"

namespace spdc {

struct SellmeierCoefficients {
    double a = 1.0;  // dimensionless
    double b = 0.0;  // µm²
    double c = 0.0;  // µm²
    double d = 0.0;  // µm⁻²

    double index_squared(double wavelength_um) const {
        const double l2 = wavelength_um * wavelength_um;
        return a + b / (l2 - c) - d * l2;
    }

    friend bool operator==(const SellmeierCoefficients&, const SellmeierCoefficients&) = default;
};

/// Named dispersion record: ordinary and principal extraordinary Sellmeier sets
/// plus the wavelength band they are trusted on.
struct Material {
    std::string name;
    SellmeierCoefficients ordinary;
    SellmeierCoefficients extraordinary;
    double band_min = 0.3 * units::um;
    double band_max = 1.1 * units::um;

    /// Band edges are inclusive up to a relative 1e-12, so that 300 nm written
    /// as 0.3e-6 or 300e-9 is accepted either way.
    bool in_band(double wavelength) const {
        return wavelength >= band_min * (1.0 - 1e-12) && wavelength <= band_max * (1.0 + 1e-12);
    }

    void require_in_band(double wavelength) const {
        if (!std::isfinite(wavelength) || !in_band(wavelength)) {
            throw std::domain_error("wavelength " + std::to_string(wavelength / units::nm) +
                                    " nm is outside the supported band [" +
                                    std::to_string(band_min / units::nm) + ", " +
                                    std::to_string(band_max / units::nm) + "] nm of '" + name + "'");
        }
    }

    /// Checks the record invariants on a dense sampling of the band:
    /// no Sellmeier pole, n² > 1, and n_o > n_ē (negative uniaxial).
    void validate() const {
        if (!(band_min > 0.0) || !(band_max > band_min))
            throw std::invalid_argument("material '" + name + "': invalid band");
        const double lo2 = std::pow(band_min / units::um, 2);
        const double hi2 = std::pow(band_max / units::um, 2);
        for (const auto* s : {&ordinary, &extraordinary}) {
            if (s->c >= lo2 && s->c <= hi2)
                throw std::invalid_argument("material '" + name + "': Sellmeier pole inside band");
        }
        constexpr int samples = 1000;
        for (int i = 0; i <= samples; ++i) {
            const double l = (band_min + (band_max - band_min) * i / samples) / units::um;
            const double no2 = ordinary.index_squared(l);
            const double ne2 = extraordinary.index_squared(l);
            if (!(no2 > 1.0) || !(ne2 > 1.0))
                throw std::invalid_argument("material '" + name + "': n² <= 1 inside band");
            if (!(no2 > ne2))
                throw std::invalid_argument("material '" + name + "': not negative uniaxial");
        }
    }
};

class UniaxialCrystal {
public:
    UniaxialCrystal(Material material, double cut_angle, double length)
        : material_(std::move(material)), cut_angle_(cut_angle), length_(length) {
        material_.validate();
        if (!(length_ > 0.0) || !std::isfinite(length_))
            throw std::invalid_argument("crystal length must be positive");
        if (!(cut_angle_ >= 0.0 && cut_angle_ <= kPi / 2))
            throw std::invalid_argument("cut angle must lie in [0, pi/2]");
    }

    const Material& material() const { return material_; }
    const SellmeierCoefficients& sellmeier_ordinary() const { return material_.ordinary; }
    const SellmeierCoefficients& sellmeier_extraordinary() const { return material_.extraordinary; }
    double cut_angle() const { return cut_angle_; }
    double length() const { return length_; }

    UniaxialCrystal with_cut_angle(double cut) const { return {material_, cut, length_}; }
    UniaxialCrystal with_length(double len) const { return {material_, cut_angle_, len}; }

private:
    Material material_;
    double cut_angle_;
    double length_;
};

inline double index_ordinary(const UniaxialCrystal& crystal, double wavelength) {
    crystal.material().require_in_band(wavelength);
    return std::sqrt(crystal.sellmeier_ordinary().index_squared(wavelength / units::um));
}

/// Principal extraordinary index n_ē (propagation perpendicular to the optic axis).
inline double index_extraordinary_principal(const UniaxialCrystal& crystal, double wavelength) {
    crystal.material().require_in_band(wavelength);
    return std::sqrt(crystal.sellmeier_extraordinary().index_squared(wavelength / units::um));
}

/// Index of the extraordinary wave propagating at `angle_from_axis` to the optic axis.
inline double index_extraordinary(const UniaxialCrystal& crystal, double wavelength,
                                  double angle_from_axis) {
    if (!(angle_from_axis >= 0.0 && angle_from_axis <= kPi))
        throw std::domain_error("angle from optic axis must lie in [0, pi]");
    const double no = index_ordinary(crystal, wavelength);
    const double ne = index_extraordinary_principal(crystal, wavelength);
    const double c = std::cos(angle_from_axis);
    const double s = std::sin(angle_from_axis);
    return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

/// Analytic dn_e/dθ = −(n_e³/2)·sin 2θ·(1/n_ē² − 1/n_o²).
inline double index_extraordinary_slope(const UniaxialCrystal& crystal, double wavelength,
                                        double angle_from_axis) {
    const double n = index_extraordinary(crystal, wavelength, angle_from_axis);
    const double no = index_ordinary(crystal, wavelength);
    const double ne = index_extraordinary_principal(crystal, wavelength);
    return -0.5 * n * n * n * std::sin(2.0 * angle_from_axis) * (1.0 / (ne * ne) - 1.0 / (no * no));
}

/// Collinear degenerate type-II mismatch in index units:
/// 2·n_e(θ, λ_p) − n_o(2λ_p) − n_e(θ, 2λ_p). Zero at the phase-matching angle.
inline double type2_index_mismatch(const UniaxialCrystal& crystal, double pump_wavelength,
                                   double angle_from_axis) {
    const double deg = 2.0 * pump_wavelength;
    return 2.0 * index_extraordinary(crystal, pump_wavelength, angle_from_axis) -
           index_ordinary(crystal, deg) - index_extraordinary(crystal, deg, angle_from_axis);
}

/// Cut angle for collinear, frequency-degenerate type-II (e → o + e) phase matching.
inline double phase_matching_cut_angle(const UniaxialCrystal& crystal, double pump_wavelength) {
    crystal.material().require_in_band(pump_wavelength);
    crystal.material().require_in_band(2.0 * pump_wavelength);
    auto mismatch = [&](double theta) { return type2_index_mismatch(crystal, pump_wavelength, theta); };
    const double f0 = mismatch(0.0);
    const double f1 = mismatch(kPi / 2);
    if (f0 == 0.0) return 0.0;
    if (f1 == 0.0) return kPi / 2;
    if (std::signbit(f0) == std::signbit(f1))
        throw std::domain_error("no phase matching for pump wavelength " +
                                std::to_string(pump_wavelength / units::nm) + " nm in '" +
                                crystal.material().name + "'");
    return numerics::find_root(mismatch, 0.0, kPi / 2, 1e-12).x;
}

/// B = dk_e/dθ at the given cut angle, in m⁻¹·rad⁻¹. Negative for a negative
/// uniaxial crystal with 0 < cut < π/2; callers that need the magnitude take |B|.
inline double transverse_walkoff_B(const UniaxialCrystal& crystal, double wavelength,
                                   double cut_angle) {
    return 2.0 * kPi / wavelength * index_extraordinary_slope(crystal, wavelength, cut_angle);
}

/// Relative frequency step used for the group-velocity derivatives.
inline constexpr double kFrequencyStep = 1e-5;

/// D = dk_e/dω − dk_o/dω at the carrier, in s/m, by central differences in ω.
inline double group_mismatch_D(const UniaxialCrystal& crystal, double wavelength,
                               double cut_angle, double relative_step = kFrequencyStep) {
    const double omega = 2.0 * kPi * kSpeedOfLight / wavelength;
    const double h = relative_step * omega;
    const double lam_plus = 2.0 * kPi * kSpeedOfLight / (omega + h);
    const double lam_minus = 2.0 * kPi * kSpeedOfLight / (omega - h);
    const Material& m = crystal.material();
    if (!m.in_band(lam_plus) || !m.in_band(lam_minus))
        throw std::domain_error("frequency step leaves the supported band of '" + m.name + "'");

    auto k_e = [&](double w) {
        return w * index_extraordinary(crystal, 2.0 * kPi * kSpeedOfLight / w, cut_angle) / kSpeedOfLight;
    };
    auto k_o = [&](double w) {
        return w * index_ordinary(crystal, 2.0 * kPi * kSpeedOfLight / w) / kSpeedOfLight;
    };
    const double dke = (k_e(omega + h) - k_e(omega - h)) / (2.0 * h);
    const double dko = (k_o(omega + h) - k_o(omega - h)) / (2.0 * h);
    return dke - dko;
}

struct LongitudinalWalkoffReport {
    double walkoff_time = 0.0;    // s
    double coherence_time = 0.0;  // s
    bool compensated = false;
};

/// Compares the o/e group delay accumulated over the crystal with the coherence
/// time λ²/(c·Δλ) set by a spectral filter of width `filter_fwhm` at `wavelength`.
inline LongitudinalWalkoffReport longitudinal_walkoff_check(const UniaxialCrystal& crystal, double D,
                                                            double filter_fwhm, double wavelength) {
    if (!(filter_fwhm > 0.0)) throw std::invalid_argument("filter FWHM must be positive");
    LongitudinalWalkoffReport r;
    r.walkoff_time = std::abs(D) * crystal.length();
    r.coherence_time = wavelength * wavelength / (kSpeedOfLight * filter_fwhm);
    r.compensated = r.walkoff_time < r.coherence_time;
    return r;
}

}  // namespace spdc

namespace spdc {

struct WalkoffParameters {
    double B = 0.0;           // m⁻¹·rad⁻¹
    double D = 0.0;           // s·m⁻¹
    double wavelength = 0.0;  // m
    double cut_angle = 0.0;   // rad
};

inline WalkoffParameters walkoff_parameters(const UniaxialCrystal& crystal, double wavelength) {
    return {transverse_walkoff_B(crystal, wavelength, crystal.cut_angle()),
            group_mismatch_D(crystal, wavelength, crystal.cut_angle()), wavelength,
            crystal.cut_angle()};
}

}  // namespace spdc
