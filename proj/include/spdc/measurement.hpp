#pragma once

// Observables of the angle-resolved two-photon state: coincidence rates behind
// two linear polarizers, aperture-averaged density matrices, visibility,
// concurrence, Bell fidelity and Poisson count simulation.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdc/biphoton_state.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

struct PolarizerSettings {
    double theta1 = 0.0;  // Glan prism in arm 1, rad
    double theta2 = 0.0;  // arm 2, rad
};

struct AngularWindow {
    double center = 0.0;
    double halfwidth = 0.0;  // 0 selects a single mode

    double lower() const { return center - halfwidth; }
    double upper() const { return center + halfwidth; }
};

/// Absolute tolerance of every angular integral (θ in radians). Line-shape
/// integrals are O(1e-3) here, so this keeps ratios of them good to ~1e-9.
inline constexpr double kQuadratureTolerance = 1e-12;
/// Windows must stay within |θ| <= this bound (paraxial regime).
inline constexpr double kMaxWindowAngle = 0.5;

/// Polarizer rate sinc²(|B|Lθ/2)·[sin²(Θ₁+Θ₂)cos²(φ/2) + sin²(Θ₁−Θ₂)sin²(φ/2)].
/// Normalized so that the uncompensated (45°, 45°) curve peaks at 1.
inline double coincidence_rate(double theta, const PolarizerSettings& s, const SourceConfig& config) {
    const double env = angular_envelope(theta, config);
    const double half_phi = 0.5 * relative_phase(theta, config);
    const double sp = std::sin(s.theta1 + s.theta2);
    const double sm = std::sin(s.theta1 - s.theta2);
    const double c = std::cos(half_phi);
    const double d = std::sin(half_phi);
    return env * env * (sp * sp * c * c + sm * sm * d * d);
}

struct ScanPoint {
    double theta = 0.0;
    double envelope = 0.0;
    double phase = 0.0;
    double rate = 0.0;
};

struct AngularScan {
    PolarizerSettings settings;
    std::vector<ScanPoint> points;
};

inline AngularScan scan(const PolarizerSettings& settings, const SourceConfig& config,
                        std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("scan grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("scan grid must be strictly increasing");
    AngularScan out{settings, {}};
    out.points.reserve(grid.size());
    for (double theta : grid) {
        out.points.push_back({theta, angular_envelope(theta, config), relative_phase(theta, config),
                              coincidence_rate(theta, settings, config)});
    }
    return out;
}

class DensityMatrix4 {
public:
    using Matrix = Eigen::Matrix4cd;

    DensityMatrix4() : m_(Matrix::Zero()) {}
    explicit DensityMatrix4(Matrix m) : m_(std::move(m)) {}

    static DensityMatrix4 projector(const TwoPhotonPolarizationState& psi) {
        Eigen::Vector4cd v;
        for (int i = 0; i < 4; ++i) v(i) = psi.amplitudes[static_cast<std::size_t>(i)];
        return DensityMatrix4(v * v.adjoint());
    }

    const Matrix& matrix() const { return m_; }
    Complex operator()(int r, int c) const { return m_(r, c); }

    Complex trace() const { return m_.trace(); }
    double purity() const { return (m_ * m_).trace().real(); }

    Eigen::Vector4d eigenvalues() const {
        const Matrix h = 0.5 * (m_ + m_.adjoint());
        return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
    }

    /// Describes the first violated invariant (Hermitian, unit trace, PSD), if any.
    std::optional<std::string> invariant_violation() const {
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return "matrix is not Hermitian";
        if (std::abs(m_.trace() - Complex{1.0}) > 1e-12) return "trace differs from 1";
        if (eigenvalues().minCoeff() < -1e-10) return "matrix is not positive semidefinite";
        return std::nullopt;
    }

    void require_valid() const {
        if (auto v = invariant_violation()) throw std::invalid_argument("invalid density matrix: " + *v);
    }

private:
    Matrix m_;
};

struct ApertureIntegrals {
    double weight = 0.0;  // ∫ w
    double cos_phi = 0.0; // ∫ w cos φ
    double sin_phi = 0.0; // ∫ w sin φ
};

inline void require_supported(const AngularWindow& window) {
    if (!(window.halfwidth >= 0.0) || !std::isfinite(window.center) || !std::isfinite(window.halfwidth))
        throw std::invalid_argument("window halfwidth must be finite and non-negative");
    if (std::abs(window.center) + window.halfwidth > kMaxWindowAngle)
        throw std::invalid_argument("window exceeds the supported angular range");
}

/// Integrals of the sinc² line-shape weight over a hard-edged window.
inline ApertureIntegrals aperture_integrals(const AngularWindow& window, const SourceConfig& config) {
    require_supported(window);
    auto w = [&](double t) {
        const double e = angular_envelope(t, config);
        return e * e;
    };
    const double a = window.lower();
    const double b = window.upper();
    ApertureIntegrals r;
    r.weight = numerics::integrate(w, a, b, kQuadratureTolerance, "aperture weight");
    r.cos_phi = numerics::integrate([&](double t) { return w(t) * std::cos(relative_phase(t, config)); },
                                    a, b, kQuadratureTolerance, "aperture coherence (real part)");
    r.sin_phi = numerics::integrate([&](double t) { return w(t) * std::sin(relative_phase(t, config)); },
                                    a, b, kQuadratureTolerance, "aperture coherence (imaginary part)");
    return r;
}

/// Mixed polarization state collected by a window: the sinc²-weighted average of
/// the per-angle projectors. A zero-width window returns the pure projector.
inline DensityMatrix4 aperture_density_matrix(const AngularWindow& window, const SourceConfig& config) {
    require_supported(window);
    if (window.halfwidth == 0.0) {
        const auto rho = DensityMatrix4::projector(state_at_angle(window.center, config));
        rho.require_valid();
        return rho;
    }
    const ApertureIntegrals I = aperture_integrals(window, config);
    if (!(I.weight > 0.0)) throw std::domain_error("window collects no emission");
    // ρ_{HV,VH} = ⟨ψ_HV ψ_VH*⟩ = ½⟨e^{−iφ}⟩
    const Complex coherence = Complex{I.cos_phi, -I.sin_phi} / (2.0 * I.weight);
    DensityMatrix4::Matrix m = DensityMatrix4::Matrix::Zero();
    m(HV, HV) = 0.5;
    m(VH, VH) = 0.5;
    m(HV, VH) = coherence;
    m(VH, HV) = std::conj(coherence);
    DensityMatrix4 rho(m);
    rho.require_valid();
    return rho;
}

struct VisibilityResult {
    double c_pp = 0.0;  // C(45°, 45°)
    double c_pm = 0.0;  // C(45°, −45°)
    double visibility = 0.0;
};

inline constexpr PolarizerSettings kSettingsPlusPlus{kPi / 4, kPi / 4};
inline constexpr PolarizerSettings kSettingsPlusMinus{kPi / 4, -kPi / 4};

inline double visibility_from_counts(double c_pp, double c_pm) {
    const double total = c_pp + c_pm;
    if (!(total > 0.0)) throw std::domain_error("visibility undefined: both coincidence counts are zero");
    return std::abs((c_pp - c_pm) / total);
}

/// Window-integrated (45°, ±45°) coincidences and V = |(C₊₊ − C₊₋)/(C₊₊ + C₊₋)|.
inline VisibilityResult visibility_counts(const AngularWindow& window, const SourceConfig& config) {
    require_supported(window);
    VisibilityResult r;
    if (window.halfwidth == 0.0) {
        r.c_pp = coincidence_rate(window.center, kSettingsPlusPlus, config);
        r.c_pm = coincidence_rate(window.center, kSettingsPlusMinus, config);
    } else {
        r.c_pp = numerics::integrate(
            [&](double t) { return coincidence_rate(t, kSettingsPlusPlus, config); }, window.lower(),
            window.upper(), kQuadratureTolerance, "C(45,45)");
        r.c_pm = numerics::integrate(
            [&](double t) { return coincidence_rate(t, kSettingsPlusMinus, config); }, window.lower(),
            window.upper(), kQuadratureTolerance, "C(45,-45)");
    }
    r.visibility = visibility_from_counts(r.c_pp, r.c_pm);
    return r;
}

inline double visibility(const AngularWindow& window, const SourceConfig& config) {
    return visibility_counts(window, config).visibility;
}

/// Wootters concurrence.
///
/// With ρ = W·W† (W = U·diag(√p) from the eigendecomposition), the square roots
/// of the eigenvalues of ρ(σy⊗σy)ρ*(σy⊗σy) are the singular values of the
/// symmetric matrix Wᵀ(σy⊗σy)W. Working with singular values avoids taking
/// square roots of round-off-sized eigenvalues.
inline double concurrence(const DensityMatrix4& rho) {
    rho.require_valid();
    using Matrix = DensityMatrix4::Matrix;
    const Matrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const Eigen::Vector4d p = eig.eigenvalues().cwiseMax(0.0);
    const Matrix w = eig.eigenvectors() * p.cwiseSqrt().asDiagonal();

    Matrix yy = Matrix::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    const Matrix tau = w.transpose() * yy * w;
    const Eigen::Vector4d s = Eigen::JacobiSVD<Matrix>(tau).singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

inline double bell_fidelity(const DensityMatrix4& rho, BellState which) {
    const auto bell = bell_state(which);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = bell.amplitudes[static_cast<std::size_t>(i)];
    return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

struct CountRecord {
    PolarizerSettings settings;
    AngularWindow window;
    double true_rate = 0.0;        // s⁻¹
    double accidental_rate = 0.0;  // s⁻¹
    double duration = 0.0;         // s
    std::uint64_t counts = 0;

    double mean() const { return (true_rate + accidental_rate) * duration; }
};

/// Accidental coincidence rate R₁·R₂·τ for singles rates R₁, R₂ and window τ.
inline double accidental_coincidence_rate(double singles1, double singles2, double window) {
    return singles1 * singles2 * window;
}

/// Poisson-distributed coincidence counts. Each call owns its generator, so the
/// result depends only on the arguments.
inline CountRecord simulate_counts(double true_rate, double accidental_rate, double duration,
                                   std::uint64_t seed, PolarizerSettings settings = {},
                                   AngularWindow window = {}) {
    if (!(true_rate >= 0.0) || !(accidental_rate >= 0.0) || !(duration >= 0.0))
        throw std::invalid_argument("rates and duration must be non-negative");
    CountRecord rec{settings, window, true_rate, accidental_rate, duration, 0};
    const double mean = rec.mean();
    if (mean > 0.0) {
        std::mt19937_64 gen(seed);
        std::poisson_distribution<std::uint64_t> poisson(mean);
        rec.counts = poisson(gen);
    }
    return rec;
}

}  // namespace spdc
