#pragma once

#include <string>

namespace bbrad {

enum class Method { quadrature, closed_form, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::quadrature:  return "quadrature";
    case Method::closed_form: return "closed_form";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

// Unit tag: cgs symbol, SI symbol, and the exact multiplicative factor
// taking a cgs value to SI.
struct Unit {
  const char* gaussian;
  const char* si;
  double to_si;
};

namespace units {
// Momentum-space diffusion constant d<p^2>/dt: g^2 cm^2 / s^3 -> kg^2 m^2 / s^3.
inline constexpr Unit momentum_diffusion{"g^2 cm^2 s^-3", "kg^2 m^2 s^-3", 1e-10};
// Mean-square momentum: g^2 cm^2 / s^2 -> kg^2 m^2 / s^2.
inline constexpr Unit momentum_squared{"g^2 cm^2 s^-2", "kg^2 m^2 s^-2", 1e-10};
// Wavenumber-space diffusion d<k^2>/dt: cm^-2 s^-1 -> m^-2 s^-1.
inline constexpr Unit wavenumber_diffusion{"cm^-2 s^-1", "m^-2 s^-1", 1e4};
// Force: dyn -> N.
inline constexpr Unit force{"dyn", "N", 1e-5};
// Force per velocity (m*xi): g/s -> kg/s.
inline constexpr Unit force_per_velocity{"g s^-1", "kg s^-1", 1e-3};
// Damping rate xi, emission/decoherence rates: 1/s (same in both systems).
inline constexpr Unit rate{"s^-1", "s^-1", 1.0};
// Cross section: cm^2 -> m^2.
inline constexpr Unit area{"cm^2", "m^2", 1e-4};
// Power: erg/s -> W.
inline constexpr Unit power{"erg s^-1", "W", 1e-7};
// Velocity: cm/s -> m/s.
inline constexpr Unit velocity{"cm s^-1", "m s^-1", 1e-2};
// Velocity squared (distribution variance): cm^2/s^2 -> m^2/s^2.
inline constexpr Unit velocity_squared{"cm^2 s^-2", "m^2 s^-2", 1e-4};
// Velocity-distribution density (integrates to 1 over velocity): s/cm -> s/m.
inline constexpr Unit velocity_density{"s cm^-1", "s m^-1", 1e2};
// Plain number.
inline constexpr Unit dimensionless{"1", "1", 1.0};
} // namespace units

// A computed quantity with units, an error estimate, and the route used.
struct RateResult {
  double value;
  Unit unit;
  double err_estimate;
  Method method;

  double value_si() const { return value * unit.to_si; }
};

} // namespace bbrad
