#pragma once

#include <numbers>

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

namespace units {
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mm = 1e-3;
inline constexpr double mrad = 1e-3;
inline constexpr double deg = std::numbers::pi / 180.0;
}  // namespace units

}  // namespace spdc
