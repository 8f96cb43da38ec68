#pragma once

#include <numbers>

namespace ntn {

inline constexpr double kSpeedOfLightKmS = 299792.458;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace ntn
