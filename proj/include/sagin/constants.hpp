#pragma once

#include <numbers>

namespace sagin {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kSpeedOfLightKmps = kSpeedOfLightMps / 1000.0;

// Sidereal rotation rate of the Earth.
inline constexpr double kEarthRotationRadPerS = 7.2921159e-5;
inline constexpr double kEarthRadiusKm = 6371.393;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

}  // namespace sagin
