#pragma once

#include <cmath>
#include <optional>

#include "bbrad/constants.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/special.hpp"

namespace bbrad {

// Motion state for the relativistic force integrals. T_lab is the
// blackbody temperature in the frame where the radiation is isotropic;
// T_particle (T') is the independent temperature parameter of the
// particle-frame occupation entering the radiation-damping term.
struct RelativisticState {
  double v;           // cm/s, |v| < c
  double gamma;       // must match 1/sqrt(1 - v^2/c^2) to 1e-14
  double T_lab;       // K
  double T_particle;  // K

  static RelativisticState make(double v, double T_lab, double T_particle) {
    RelativisticState s{v, 0.0, T_lab, T_particle};
    const double beta = v / constants::c;
    if (!(std::abs(beta) < 1.0)) throw domain_error("RelativisticState: requires |v| < c");
    s.gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    s.validate();
    return s;
  }

  void validate() const {
    const double beta = v / constants::c;
    if (!(std::abs(beta) < 1.0)) throw domain_error("RelativisticState: requires |v| < c");
    if (!(T_lab > 0.0) || !(T_particle > 0.0)) {
      throw domain_error("RelativisticState: temperatures must be positive");
    }
    const double g = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
    if (std::abs(gamma - g) > 1e-14 * g) {
      throw domain_error("RelativisticState: gamma inconsistent with v");
    }
  }

  double beta() const { return v / constants::c; }
};

namespace detail {

// alpha_I for drag integrands. Unlike diffusion, a negative value
// (inverted two-level populations) is allowed: it produces gain, i.e.
// negative drag.
inline double alpha_I_for_drag(const PolarizabilityModel& m, double omega) {
  return alpha_I_effective(m, omega).value;
}

} // namespace detail

struct DragCoefficient {
  RateResult force_per_velocity;        // m xi, g/s; F = -(m xi) v
  std::optional<RateResult> xi;         // 1/s, present when a mass was supplied
};

// Velocity-linear drag coefficient in isotropic thermal radiation:
//   m xi = (4 hbar / 3 pi c^5) Int domega omega^5 alpha_I(omega) (-dn/domega),
// with dn/domega = -(hbar / k_B T) n(n+1) substituted analytically.
inline DragCoefficient drag_coefficient_nonrel(const PolarizabilityModel& m, double T,
                                               const QuadratureConfig& cfg = {},
                                               std::optional<double> mass = std::nullopt) {
  if (!(T > 0.0)) throw domain_error("drag_coefficient_nonrel: T must be positive");
  const double omega_T = constants::thermal_omega(T);
  const double c = constants::c;
  const double pref = 4.0 * constants::hbar /
                      (3.0 * constants::pi * c * c * c * c * c) *
                      std::pow(omega_T, 5.0);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, 5.0) * detail::alpha_I_for_drag(m, x * omega_T) *
           bose_occupation_fluct(x);
  };
  const Integral q = integrate_semi_infinite(integrand, 1.0, cfg,
                                             detail::resonance_breakpoints(m, omega_T));
  DragCoefficient out;
  out.force_per_velocity = {pref * q.value, units::force_per_velocity, pref * q.err,
                            Method::quadrature};
  if (mass) {
    if (!(*mass > 0.0)) throw domain_error("drag_coefficient_nonrel: mass must be positive");
    out.xi = RateResult{out.force_per_velocity.value / *mass, units::rate,
                        out.force_per_velocity.err_estimate / *mass, Method::quadrature};
  }
  return out;
}

// Closed forms of m xi for the electron and the dielectric sphere:
//   electron: (32 pi^3 / 135) hbar (e^2/m c^2)^2 (k_B T / hbar c)^4
//   sphere:   (512 pi^7 / 135) hbar a^6 |(eps-1)/(eps+2)|^2 (k_B T / hbar c)^8
inline RateResult drag_closed_form(const PolarizabilityModel& m, double T) {
  if (!(T > 0.0)) throw domain_error("drag_closed_form: T must be positive");
  const double kbar = constants::thermal_wavenumber(T);
  const double pi = constants::pi;
  double value = 0.0;
  if (const auto* e = std::get_if<ElectronModel>(&m)) {
    const double re = e->charge * e->charge / (e->mass * constants::c * constants::c);
    value = 32.0 * pi * pi * pi / 135.0 * constants::hbar * re * re * std::pow(kbar, 4.0);
  } else if (const auto* s = std::get_if<SphereModel>(&m)) {
    detail::check_model(*s);
    const double a3 = s->radius * s->radius * s->radius;
    const double pol2 = std::norm((s->epsilon - 1.0) / (s->epsilon + 2.0));
    value = 512.0 * std::pow(pi, 7.0) / 135.0 * constants::hbar * a3 * a3 * pol2 *
            std::pow(kbar, 8.0);
  } else {
    throw unsupported_model_error("drag_closed_form: no printed closed form for this model");
  }
  return {value, units::force_per_velocity, 0.0, Method::closed_form};
}

// Lab-frame force from the Doppler-shifted occupation of the absorbed
// field (the "induced" piece):
//   F_ind = (hbar c / pi^2) Int d^3k k k_x alpha_I(omega) n(gamma(omega + v k_x); T_lab),
// reduced by azimuthal symmetry to
//   F_ind = (2 hbar / pi c^4) Int domega omega^4 alpha_I(omega)
//           Int_{-1}^{1} dmu mu n(gamma omega (1 + beta mu); T_lab).
// v = 0 returns exactly 0: the mu-integrand is odd.
inline RateResult force_induced(const RelativisticState& state, const PolarizabilityModel& m,
                                const QuadratureConfig& cfg = {}) {
  state.validate();
  if (state.v == 0.0) return {0.0, units::force, 0.0, Method::quadrature};
  const double beta = state.beta();
  const double gamma = state.gamma;
  const double omega_T = constants::thermal_omega(state.T_lab);
  const double c = constants::c;
  const double pref = 2.0 * constants::hbar / (constants::pi * c * c * c * c) *
                      std::pow(omega_T, 5.0);

  QuadratureConfig inner = cfg;
  inner.max_subdivisions = 200;
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double aI = detail::alpha_I_for_drag(m, x * omega_T);
    if (aI == 0.0) return 0.0;
    const Integral mu_int = integrate(
        [&](double mu) {
          const double arg = gamma * x * (1.0 + beta * mu);
          return mu * bose_occupation(arg);
        },
        -1.0, 1.0, inner);
    return std::pow(x, 4.0) * aI * mu_int.value;
  };
  // The occupation decays slowest along mu = -sign(beta); stretch the tail
  // cutoff so the Doppler-downshifted band is fully covered.
  const double u_minus = gamma * (1.0 - std::abs(beta));
  const Integral q = integrate_semi_infinite(integrand, 1.0 / u_minus, cfg,
                                             detail::resonance_breakpoints(m, omega_T));
  return {pref * q.value, units::force, pref * q.err, Method::quadrature};
}

// Radiation-damping force from the particle-frame occupation:
//   F_dd = -(4 v hbar / pi c^5) Int domega omega^4 alpha_I(omega) n(omega; T').
inline RateResult force_dd(const RelativisticState& state, const PolarizabilityModel& m,
                           const QuadratureConfig& cfg = {}) {
  state.validate();
  if (state.v == 0.0) return {0.0, units::force, 0.0, Method::quadrature};
  const double omega_Tp = constants::thermal_omega(state.T_particle);
  const double c = constants::c;
  const double pref = -4.0 * state.v * constants::hbar /
                      (constants::pi * c * c * c * c * c) *
                      std::pow(omega_Tp, 5.0);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, 4.0) * detail::alpha_I_for_drag(m, x * omega_Tp) *
           bose_occupation(x);
  };
  const Integral q = integrate_semi_infinite(integrand, 1.0, cfg,
                                             detail::resonance_breakpoints(m, omega_Tp));
  return {pref * q.value, units::force, std::abs(pref) * q.err, Method::quadrature};
}

// Power absorbed from the lab-frame field, evaluated in the particle frame:
//   dE'/dt' = (4 hbar / pi c^3) Int domega omega^4 alpha_I(omega)
//             (1/2) Int_{-1}^{1} dmu n(gamma omega (1 + beta mu); T_lab).
inline RateResult absorbed_power_particle_frame(const RelativisticState& state,
                                                const PolarizabilityModel& m,
                                                const QuadratureConfig& cfg = {}) {
  state.validate();
  const double beta = state.beta();
  const double gamma = state.gamma;
  const double omega_T = constants::thermal_omega(state.T_lab);
  const double c = constants::c;
  const double pref = 4.0 * constants::hbar / (constants::pi * c * c * c) *
                      std::pow(omega_T, 5.0);
  QuadratureConfig inner = cfg;
  inner.max_subdivisions = 200;
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double aI = detail::alpha_I_for_drag(m, x * omega_T);
    if (aI == 0.0) return 0.0;
    const Integral mu_int = integrate(
        [&](double mu) {
          return bose_occupation(gamma * x * (1.0 + beta * mu));
        },
        -1.0, 1.0, inner);
    return std::pow(x, 4.0) * aI * 0.5 * mu_int.value;
  };
  const double u_minus = gamma * (1.0 - std::abs(beta));
  const Integral q = integrate_semi_infinite(integrand, 1.0 / u_minus, cfg,
                                             detail::resonance_breakpoints(m, omega_T));
  return {pref * q.value, units::power, pref * q.err, Method::quadrature};
}

// Total lab-frame force in the closed double-integral form:
//   F_x = -(hbar / pi gamma^2 v^2 c^2) Int domega omega^4 alpha_I(omega)
//         Int_{u-}^{u+} dy (y - 1/gamma)
//         [coth(hbar omega / 2 k_B T') - coth(hbar omega y / 2 k_B T)],
// with u+- = sqrt((1 +- v/c)/(1 -+ v/c)). The coth difference is evaluated
// as 2[n(omega; T') - n(omega y; T)] so the +1 terms cancel exactly.
// v = 0 makes the y-interval degenerate and is rejected; that limit is
// served by the nonrelativistic path.
inline RateResult total_force_relativistic(const RelativisticState& state,
                                           const PolarizabilityModel& m,
                                           const QuadratureConfig& cfg = {}) {
  state.validate();
  if (state.v == 0.0) {
    throw domain_error("total_force_relativistic: v = 0 degenerates the y-interval; "
                       "use the nonrelativistic drag coefficient");
  }
  const double beta = state.beta();
  const double gamma = state.gamma;
  const double u_plus = std::sqrt((1.0 + beta) / (1.0 - beta));
  const double u_minus = 1.0 / u_plus;
  const double omega_T = constants::thermal_omega(state.T_lab);
  const double t_ratio = state.T_lab / state.T_particle;
  const double c = constants::c;
  const double pref = -2.0 * constants::hbar /
                      (constants::pi * gamma * gamma * state.v * state.v * c * c) *
                      std::pow(omega_T, 5.0);

  QuadratureConfig inner = cfg;
  inner.max_subdivisions = 400;
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double aI = detail::alpha_I_for_drag(m, x * omega_T);
    if (aI == 0.0) return 0.0;
    const Integral y_int = integrate(
        [&](double y) {
          return (y - 1.0 / gamma) *
                 (bose_occupation(x * t_ratio) - bose_occupation(x * y));
        },
        u_minus, u_plus, inner);
    return std::pow(x, 4.0) * aI * y_int.value;
  };
  const double scale = std::max(1.0 / t_ratio, 1.0 / u_minus);
  const Integral q = integrate_semi_infinite(integrand, scale, cfg,
                                             detail::resonance_breakpoints(m, omega_T));
  return {pref * q.value, units::force, std::abs(pref) * q.err, Method::quadrature};
}

// Recomposition of the total force from its pieces through the force
// transformation F_x = F'_x + (v/c^2) dE'/dt':
//   F_total = F_ind + F_dd + (v/c^2) * absorbed particle-frame power.
// Independent route against total_force_relativistic.
inline RateResult total_force_composed(const RelativisticState& state,
                                       const PolarizabilityModel& m,
                                       const QuadratureConfig& cfg = {}) {
  const RateResult find = force_induced(state, m, cfg);
  const RateResult fdd = force_dd(state, m, cfg);
  const RateResult pabs = absorbed_power_particle_frame(state, m, cfg);
  const double vc2 = state.v / (constants::c * constants::c);
  const double value = find.value + fdd.value + vc2 * pabs.value;
  const double err = find.err_estimate + fdd.err_estimate +
                     std::abs(vc2) * pabs.err_estimate;
  return {value, units::force, err, Method::quadrature};
}

// Drag coefficient of a narrow two-level absorber:
//   m xi = (hbar omega0 / c^2)(p1 - p2) B [rho(omega0) - (omega0/3) rho'(omega0)],
// with B = 4 pi^2 mu^2 / 3 hbar^2 and rho the Planck spectral energy density
//   rho(omega) = (hbar omega^3 / pi^2 c^3) n(hbar omega / k_B T).
// Inverted populations flip the sign (gain). Narrow-line validity (beta
// small against omega0) is the caller's responsibility; the quadrature
// route in drag_coefficient_nonrel covers general linewidths.
inline RateResult two_level_drag(const TwoLevelModel& m, double T) {
  detail::check_model(m);
  if (!(T > 0.0)) throw domain_error("two_level_drag: T must be positive");
  const double c = constants::c;
  const double pi = constants::pi;
  const double hbar = constants::hbar;
  const double x0 = hbar * m.omega0 / (constants::k_B * T);
  const double n0 = bose_occupation(x0);
  const double rho = hbar * std::pow(m.omega0, 3.0) / (pi * pi * c * c * c) * n0;
  const double drho = hbar / (pi * pi * c * c * c) *
                      (3.0 * m.omega0 * m.omega0 * n0 -
                       std::pow(m.omega0, 3.0) * (hbar / (constants::k_B * T)) *
                           bose_occupation_fluct(x0));
  const double B = 4.0 * pi * pi * m.mu * m.mu / (3.0 * hbar * hbar);
  const double value = hbar * m.omega0 / (c * c) * (m.p1 - m.p2) * B *
                       (rho - m.omega0 / 3.0 * drho);
  return {value, units::force_per_velocity, 0.0, Method::closed_form};
}

// Friction on an excited atom decaying in vacuum while moving:
//   F = -(v/c^2) hbar omega0 Gamma e^(-Gamma t).
// Valid to first order in v/c; enforced as |v|/c < 0.1.
inline RateResult vacuum_friction_excited_atom(double v, double omega0, double Gamma,
                                               double t) {
  if (!(omega0 > 0.0)) throw domain_error("vacuum_friction_excited_atom: omega0 must be positive");
  if (Gamma < 0.0) throw domain_error("vacuum_friction_excited_atom: Gamma must be nonnegative");
  if (t < 0.0) throw domain_error("vacuum_friction_excited_atom: t must be nonnegative");
  if (!(std::abs(v) / constants::c < 0.1)) {
    throw regime_error("vacuum_friction_excited_atom: first-order-in-v/c form needs |v|/c < 0.1");
  }
  const double value = -v / (constants::c * constants::c) * constants::hbar * omega0 *
                       Gamma * std::exp(-Gamma * t);
  return {value, units::force, 0.0, Method::closed_form};
}

} // namespace bbrad
