#pragma once

#include <numbers>

namespace aptsense::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

/// ħ — reduced Planck constant [J·s], CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;

/// c — speed of light in vacuum [m/s], exact.
inline constexpr double speed_of_light = 299792458.0;

}  // namespace aptsense::constants
