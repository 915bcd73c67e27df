#pragma once

// Physical constants in Gaussian-cgs units (CODATA 2018).
// All internal computation uses cgs; conversion to SI happens only at the
// output layer (see result.hpp).

namespace bbrad::constants {

inline constexpr double c      = 2.99792458e10;    // speed of light, cm/s (exact)
inline constexpr double hbar   = 1.054571817e-27;  // reduced Planck constant, erg s
inline constexpr double k_B    = 1.380649e-16;     // Boltzmann constant, erg/K (exact)
inline constexpr double m_e    = 9.1093837015e-28; // electron mass, g
inline constexpr double e_esu  = 4.80320471257e-10;// elementary charge, statC
inline constexpr double amu    = 1.66053906660e-24;// atomic mass unit, g

// Derived electron quantities.
inline constexpr double r_e     = e_esu * e_esu / (m_e * c * c);          // classical radius, cm
inline constexpr double tau_e   = 2.0 * e_esu * e_esu / (3.0 * m_e * c * c * c); // radiation time, s
inline constexpr double pi      = 3.14159265358979323846;
inline constexpr double sigma_T = 8.0 * pi / 3.0 * r_e * r_e;             // Thomson cross section, cm^2

// Thermal scales at temperature T (K).
inline constexpr double thermal_omega(double T) { return k_B * T / hbar; }   // rad/s
inline constexpr double thermal_wavenumber(double T) { return k_B * T / (hbar * c); } // 1/cm

} // namespace bbrad::constants
