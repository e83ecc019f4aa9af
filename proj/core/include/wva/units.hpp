#pragma once

#include <numbers>

namespace wva {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kAttosecond = 1e-18;            // s

constexpr double deg_to_rad(double degrees) noexcept { return degrees * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double radians) noexcept { return radians * 180.0 / std::numbers::pi; }

/// Optical angular frequency for a vacuum wavelength in metres.
constexpr double angular_frequency(double wavelength) noexcept {
  return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength;
}

}  // namespace wva
