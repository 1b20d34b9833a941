#pragma once

// Unit conventions and physical constants.
//
// All rates and frequencies inside the library are angular (rad/s).
// Configuration files and the CLI speak ordinary frequency (Hz, keys
// suffixed *_hz) and angles in degrees; conversion happens only at
// those boundaries.

#include <cmath>
#include <numbers>

namespace cmt {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K

/// Ordinary frequency (Hz) -> angular frequency (rad/s).
inline constexpr double hz_to_rad(double f_hz) { return two_pi * f_hz; }

/// Angular frequency (rad/s) -> ordinary frequency (Hz).
inline constexpr double rad_to_hz(double omega) { return omega / two_pi; }

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

/// Power dB of a (complex-magnitude) scattering amplitude: 10 log10 |s|^2.
inline double power_db(double abs_s) {
    return 20.0 * std::log10(abs_s);
}

/// Insertion loss in dB of a transmission amplitude (positive number for |s| < 1).
inline double insertion_loss_db(double abs_s) { return -power_db(abs_s); }

}  // namespace cmt
