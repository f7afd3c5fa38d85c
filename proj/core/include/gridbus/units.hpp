#pragma once

// Unit conventions used throughout:
//   time            ns
//   angular freq    rad/ns   (omega = twopi * f, with f in GHz)
//   rates           1/ns
//   length          nm (device geometry is taken in SI and converted)
// Hamiltonians are expressed with hbar = 1, i.e. energies are angular
// frequencies in rad/ns.

namespace gridbus::units {

inline constexpr double twopi = 6.283185307179586476925286766559;

// CODATA 2018 SI values
inline constexpr double hbar_SI = 1.054571817e-34;   // J s
inline constexpr double h_SI = 6.62607015e-34;       // J s
inline constexpr double e_SI = 1.602176634e-19;      // C
inline constexpr double m_e_SI = 9.1093837015e-31;   // kg
inline constexpr double mu_B_SI = 9.2740100783e-24;  // J/T

// ordinary frequency in GHz -> angular rad/ns
inline constexpr double angular_from_GHz(double f_GHz) { return twopi * f_GHz; }
inline constexpr double GHz_from_angular(double w) { return w / twopi; }

// angular rad/s -> rad/ns
inline constexpr double per_ns_from_per_s(double w_SI) { return w_SI * 1e-9; }

}  // namespace gridbus::units
