#pragma once

// Mapping between pinhole positions in the lens focal plane, external (lab)
// angles and internal (in-crystal) angles. The physics works with internal
// angles; refraction at the exit face is taken in the small-angle limit with
// the ordinary index at the degenerate wavelength.

#include <cmath>
#include <stdexcept>

#include "spdc/crystal_optics.hpp"

namespace spdc {

struct GeometryConfig {
    double lens_focal_length = 0.5;  // m
    double pinhole_diameter = 0.0;   // m
    double pinhole_offset = 0.0;     // m, transverse position in the focal plane
    double ambient_index = 1.0;

    void validate() const {
        if (!(lens_focal_length > 0.0)) throw std::invalid_argument("focal length must be positive");
        if (!(pinhole_diameter >= 0.0)) throw std::invalid_argument("pinhole diameter must be non-negative");
        if (!(ambient_index >= 1.0)) throw std::invalid_argument("ambient index must be >= 1");
    }
};

/// |offset| / f must stay below this for the paraxial mapping to hold.
inline constexpr double kMaxPinholeRatio = 0.1;

inline double external_to_internal_angle(double theta_ext, const GeometryConfig& geometry,
                                         const UniaxialCrystal& crystal, double wavelength) {
    return theta_ext * geometry.ambient_index / index_ordinary(crystal, wavelength);
}

inline double internal_to_external_angle(double theta_int, const GeometryConfig& geometry,
                                         const UniaxialCrystal& crystal, double wavelength) {
    return theta_int * index_ordinary(crystal, wavelength) / geometry.ambient_index;
}

inline double pinhole_to_external_angle(double offset, const GeometryConfig& geometry) {
    const double ratio = offset / geometry.lens_focal_length;
    if (!(std::abs(ratio) < kMaxPinholeRatio))
        throw std::domain_error("pinhole offset outside the small-angle regime (|offset|/f >= 0.1)");
    return ratio;
}

inline double pinhole_to_internal_angle(double offset, const GeometryConfig& geometry,
                                        const UniaxialCrystal& crystal, double wavelength) {
    return external_to_internal_angle(pinhole_to_external_angle(offset, geometry), geometry, crystal,
                                      wavelength);
}

}  // namespace spdc
