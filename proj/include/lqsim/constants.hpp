#pragma once

// Unit conventions used throughout the library:
//   time               ps
//   angular frequency  rad/ps   (hbar = 1, so energies are also rad/ps)
//   length             nm
//   band/level energy  meV      (nanowire / phonon modules, converted at the
//                                boundary via hbar_meV_ps)
// Rates in 1/ps internally; CSV output uses 1/s where the quantity is a
// physical rate.

namespace lqsim {

// CODATA 2018
namespace si {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double e_charge = 1.602176634e-19;   // C
inline constexpr double m0 = 9.1093837015e-31;        // kg
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double c_light = 2.99792458e8;       // m/s
inline constexpr double kB = 1.380649e-23;            // J/K
}  // namespace si

inline constexpr double hbar_meV_ps = 0.6582119569;           // meV ps
inline constexpr double meV_to_radps = 1.0 / hbar_meV_ps;     // rad/ps per meV
inline constexpr double kB_meV_per_K = 0.08617333262;         // meV/K

// hbar^2/(2 m0) in meV nm^2; derived from the SI constants above.
inline constexpr double hbar_sq_over_2m0 =
    si::hbar * si::hbar / (2.0 * si::m0)         // J m^2
    / (si::e_charge * 1e-3)                      // -> meV m^2
    * 1e18;                                      // -> meV nm^2

inline constexpr double pi = 3.14159265358979323846;

}  // namespace lqsim
