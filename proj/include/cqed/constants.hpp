#pragma once

#include <numbers>

// SI constants and unit helpers shared by all modules. Frequencies are
// stored as angular rates (rad/s) throughout the library; the /2pi
// convention appears only at I/O boundaries.
namespace cqed {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double hbar = planck / two_pi;        // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s

inline constexpr double caesium_mass = 2.20694650e-25;  // kg

// conversions between angular rates and the /2pi values quoted at I/O
inline constexpr double mhz_to_angular(double f_mhz) { return two_pi * 1e6 * f_mhz; }
inline constexpr double angular_to_mhz(double w) { return w / (two_pi * 1e6); }
inline constexpr double khz_to_angular(double f_khz) { return two_pi * 1e3 * f_khz; }
inline constexpr double angular_to_khz(double w) { return w / (two_pi * 1e3); }

inline constexpr double mk_to_joule(double t_mk) { return k_boltzmann * 1e-3 * t_mk; }
inline constexpr double joule_to_mk(double u) { return u / (k_boltzmann * 1e-3); }

}  // namespace cqed
