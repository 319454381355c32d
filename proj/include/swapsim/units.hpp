#pragma once

/**
 * Unit conventions and physical constants shared across the toolkit.
 *
 * Internal convention: SI base units everywhere (metres, seconds, kilograms,
 * kelvin, watts).  Two deliberate exceptions, chosen to match how the hardware
 * numbers are quoted:
 *   - yaw angles are carried in degrees,
 *   - battery capacity is carried in ampere-hours.
 * Conversion helpers below are the only sanctioned way to cross a unit
 * boundary; ad-hoc factors sprinkled through the code are a bug.
 */

#include <numbers>

namespace swapsim {

/// Stefan-Boltzmann constant, W / (m^2 K^4).  CODATA 2018 exact value.
inline constexpr double kStefanBoltzmann = 5.670374419e-8;

/// Offset between the Celsius and kelvin scales.
inline constexpr double kCelsiusOffset = 273.15;

inline constexpr double deg_to_rad(double deg) {
    return deg * std::numbers::pi / 180.0;
}

inline constexpr double rad_to_deg(double rad) {
    return rad * 180.0 / std::numbers::pi;
}

inline constexpr double celsius_to_kelvin(double c) { return c + kCelsiusOffset; }

inline constexpr double kelvin_to_celsius(double k) { return k - kCelsiusOffset; }

inline constexpr double hours_to_seconds(double h) { return h * 3600.0; }

inline constexpr double seconds_to_hours(double s) { return s / 3600.0; }

}  // namespace swapsim
