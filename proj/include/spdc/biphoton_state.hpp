#pragma once

// Angle-resolved polarization state of collinear type-II down-conversion and
// its phase law under additional birefringent crystals.
//
// The mode pair (−θ, +θ) carries
//
//   |ψ(θ)⟩ = (|H₋θ V₊θ⟩ + e^{iφ(θ)} |H₊θ V₋θ⟩) / √2
//
// which in the polarization basis (HH, HV, VH, VV) is (0, 1, e^{iφ}, 0)/√2.
// The production crystal contributes φ = |B|·L·θ (pairs are born on average
// half way through it). A compensator is traversed in full and contributes
// ±2·|B_c|·L_c·θ, so a half-length crystal with its axis flipped cancels the
// production phase and the same crystal aligned doubles it.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "spdc/crystal_optics.hpp"
#include "spdc/errors.hpp"

namespace spdc {

using Complex = std::complex<double>;

enum class Orientation {
    Compensating,      // optic axis rotated by 180° with respect to the production crystal
    AntiCompensating,  // optic axis aligned with the production crystal
};

inline int orientation_sign(Orientation o) { return o == Orientation::Compensating ? -1 : +1; }

struct CompensatorPlacement {
    UniaxialCrystal crystal;
    Orientation orientation;

    /// Compensator cut like the production crystal, only the length differs.
    static CompensatorPlacement cut_like(const UniaxialCrystal& production, double length,
                                         Orientation orientation) {
        return {production.with_length(length), orientation};
    }
};

/// Tolerance for the production cut angle against the computed phase-matching angle.
inline constexpr double kCutAngleTolerance = 1e-6;

class SourceConfig {
public:
    SourceConfig(UniaxialCrystal production, double pump_wavelength,
                 std::vector<CompensatorPlacement> compensators = {})
        : production_(std::move(production)),
          pump_wavelength_(pump_wavelength),
          compensators_(std::move(compensators)) {
        const double pm = phase_matching_cut_angle(production_, pump_wavelength_);
        if (std::abs(pm - production_.cut_angle()) > kCutAngleTolerance)
            throw std::invalid_argument("production crystal cut angle is not phase matched for the pump");

        const double deg = degenerate_wavelength();
        production_B_ = transverse_walkoff_B(production_, deg, production_.cut_angle());
        envelope_scale_ = std::abs(production_B_) * production_.length();
        phase_slope_ = envelope_scale_;
        for (const auto& c : compensators_) {
            const double bc = std::abs(transverse_walkoff_B(c.crystal, deg, c.crystal.cut_angle()));
            phase_slope_ += orientation_sign(c.orientation) * 2.0 * (bc * c.crystal.length());
        }
    }

    /// Production crystal cut exactly at the phase-matching angle for `pump_wavelength`.
    static SourceConfig phase_matched(const Material& material, double length, double pump_wavelength) {
        UniaxialCrystal probe(material, kPi / 4, length);
        return {probe.with_cut_angle(phase_matching_cut_angle(probe, pump_wavelength)), pump_wavelength};
    }

    SourceConfig with_compensator(double length, Orientation orientation) const {
        auto comps = compensators_;
        comps.push_back(CompensatorPlacement::cut_like(production_, length, orientation));
        return {production_, pump_wavelength_, std::move(comps)};
    }

    SourceConfig without_compensators() const { return {production_, pump_wavelength_}; }

    const UniaxialCrystal& production() const { return production_; }
    const std::vector<CompensatorPlacement>& compensators() const { return compensators_; }
    double pump_wavelength() const { return pump_wavelength_; }
    double degenerate_wavelength() const { return 2.0 * pump_wavelength_; }

    /// Signed B of the production crystal at the degenerate wavelength.
    double production_B() const { return production_B_; }
    /// |B|·L of the production crystal; sets the sinc envelope width.
    double envelope_scale() const { return envelope_scale_; }
    /// dφ/dθ of the total relative phase.
    double phase_slope() const { return phase_slope_; }

    /// True when compensators cancel the angular phase.
    bool is_uniform() const { return std::abs(phase_slope_) <= 1e-12 * envelope_scale_; }

private:
    UniaxialCrystal production_;
    double pump_wavelength_;
    std::vector<CompensatorPlacement> compensators_;
    double production_B_ = 0.0;
    double envelope_scale_ = 0.0;
    double phase_slope_ = 0.0;
};

enum BasisIndex : std::size_t { HH = 0, HV = 1, VH = 2, VV = 3 };

struct TwoPhotonPolarizationState {
    std::array<Complex, 4> amplitudes{};

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }

    Complex inner(const TwoPhotonPolarizationState& other) const {
        Complex s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) s += std::conj(amplitudes[i]) * other.amplitudes[i];
        return s;
    }
};

enum class BellState { PsiPlus, PsiMinus };

inline TwoPhotonPolarizationState bell_state(BellState which) {
    const double r = 1.0 / std::sqrt(2.0);
    return {{Complex{0.0}, Complex{r}, Complex{which == BellState::PsiPlus ? r : -r}, Complex{0.0}}};
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

inline double relative_phase(double theta, const SourceConfig& config) {
    return config.phase_slope() * theta;
}

/// sinc(|B|·L·θ/2). Compensators act after generation and leave it unchanged.
inline double angular_envelope(double theta, const SourceConfig& config) {
    return sinc(0.5 * config.envelope_scale() * theta);
}

inline TwoPhotonPolarizationState state_at_angle(double theta, const SourceConfig& config) {
    const double r = 1.0 / std::sqrt(2.0);
    const double phi = relative_phase(theta, config);
    return {{Complex{0.0}, Complex{r}, r * Complex{std::cos(phi), std::sin(phi)}, Complex{0.0}}};
}

struct AngularSample {
    double theta = 0.0;
    double envelope = 0.0;
    double phase = 0.0;
    TwoPhotonPolarizationState state;
};

inline AngularSample sample_at(double theta, const SourceConfig& config) {
    return {theta, angular_envelope(theta, config), relative_phase(theta, config),
            state_at_angle(theta, config)};
}

struct BellAngle {
    double theta = 0.0;  // internal angle; −θ is implied
    double envelope = 0.0;
};

struct BellAngles {
    std::vector<BellAngle> angles;
    bool uniform = false;  // the whole line-shape carries Ψ⁺
};

/// Angles θ ≥ 0 at which the slice is exactly Ψ⁺ (φ ≡ 0 mod 2π) or Ψ⁻ (φ ≡ π),
/// in increasing order, at most `max_order` of them.
inline BellAngles bell_angles(const SourceConfig& config, BellState which, int max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    BellAngles out;
    if (config.is_uniform()) {
        if (which == BellState::PsiMinus) throw UniformStateError();
        out.uniform = true;
        out.angles.push_back({0.0, 1.0});
        return out;
    }
    const double slope = std::abs(config.phase_slope());
    for (int m = 0; m < max_order; ++m) {
        const double phase = which == BellState::PsiPlus ? 2.0 * kPi * m : kPi * (2 * m + 1);
        const double theta = phase / slope;
        out.angles.push_back({theta, angular_envelope(theta, config)});
    }
    return out;
}

}  // namespace spdc
