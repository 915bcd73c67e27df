#pragma once

#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/special.hpp"

namespace bbrad {

// Isotropic thermal radiation at temperature T with a choice of which
// occupation weight enters momentum-transfer integrals.
struct ThermalEnvironment {
  double T;  // K
  Statistics statistics = Statistics::full_n2_plus_n;
};

// Dilute ideal gas buffeting a rigid sphere of radius `radius`.
struct AirEnvironment {
  double T;               // K
  double molecule_mass;   // g
  double number_density;  // 1/cm^3
  double radius;          // cm
};

namespace detail {

inline void check_env(const ThermalEnvironment& env) {
  if (!(env.T > 0.0)) throw domain_error("ThermalEnvironment: T must be positive");
}

inline void check_env(const AirEnvironment& env) {
  if (!(env.T > 0.0)) throw domain_error("AirEnvironment: T must be positive");
  if (!(env.molecule_mass > 0.0)) throw domain_error("AirEnvironment: molecule mass must be positive");
  if (!(env.number_density > 0.0)) throw domain_error("AirEnvironment: number density must be positive");
  if (!(env.radius > 0.0)) throw domain_error("AirEnvironment: radius must be positive");
}

// Seed panel edges around a narrow two-level resonance, in units of the
// dimensionless variable x = hbar omega / k_B T.
inline std::vector<double> resonance_breakpoints(const PolarizabilityModel& m,
                                                 double omega_scale) {
  std::vector<double> pts;
  if (const auto* tl = std::get_if<TwoLevelModel>(&m)) {
    const double x0 = tl->omega0 / omega_scale;
    const double w = tl->beta / omega_scale;
    for (double k : {-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0}) {
      pts.push_back(x0 + k * w);
    }
  }
  return pts;
}

// alpha_I for momentum-diffusion integrands; gain media are rejected here.
inline double alpha_I_for_diffusion(const PolarizabilityModel& m, double omega) {
  const AlphaIEff a = alpha_I_effective(m, omega);
  if (a.negative) {
    throw domain_error("diffusion: model has Im alpha < 0 (gain); "
                       "momentum diffusion is defined for absorbing/scattering response");
  }
  return a.value;
}

} // namespace detail

// Momentum diffusion constant d<p^2>/dt produced by thermal radiation:
//   D = (8 hbar^2 / 3 pi c^5) Int omega^5 alpha_I(omega) S(x) domega,
// with S the occupation weight selected by env.statistics and
// x = hbar omega / k_B T. Evaluated by adaptive quadrature in x.
inline RateResult diffusion_constant(const PolarizabilityModel& m,
                                     const ThermalEnvironment& env,
                                     const QuadratureConfig& cfg = {}) {
  detail::check_env(env);
  const double omega_T = constants::thermal_omega(env.T);
  const double c = constants::c;
  const double pref = 8.0 * constants::hbar * constants::hbar /
                      (3.0 * constants::pi * c * c * c * c * c) *
                      std::pow(omega_T, 6.0);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double aI = detail::alpha_I_for_diffusion(m, x * omega_T);
    return std::pow(x, 5.0) * aI * statistics_weight(x, env.statistics);
  };
  const Integral q = integrate_semi_infinite(integrand, 1.0, cfg,
                                             detail::resonance_breakpoints(m, omega_T));
  return {pref * q.value, units::momentum_diffusion, pref * q.err, Method::quadrature};
}

// Closed forms for the same constant. Electron values scale as T^5, sphere
// values as T^9. The two-level model has no closed form here.
inline RateResult diffusion_closed_form(const PolarizabilityModel& m,
                                        const ThermalEnvironment& env) {
  detail::check_env(env);
  const double kT = constants::k_B * env.T;
  const double hbar = constants::hbar;
  const double c = constants::c;
  const double pi = constants::pi;

  double full = 0.0, particle = 0.0;
  if (const auto* e = std::get_if<ElectronModel>(&m)) {
    const double re = e->charge * e->charge / (e->mass * c * c);
    const double base = re * re * std::pow(kT, 5.0) / (hbar * hbar * hbar * c * c * c * c);
    full = 64.0 * pi * pi * pi / 135.0 * base;
    particle = 128.0 / (3.0 * pi) * riemann_zeta(5.0) * base;
  } else if (const auto* s = std::get_if<SphereModel>(&m)) {
    detail::check_model(*s);
    const double a3 = s->radius * s->radius * s->radius;
    const double pol2 = std::norm((s->epsilon - 1.0) / (s->epsilon + 2.0));
    const double kexp = std::pow(kT / (hbar * c), 9.0);
    const double base = a3 * a3 * pol2 * c * kexp * hbar * hbar;  // p-space
    full = 1024.0 * std::pow(pi, 7.0) / 135.0 * base;
    particle = 16.0 / (9.0 * pi) * std::tgamma(9.0) * riemann_zeta(9.0) * base;
  } else {
    throw unsupported_model_error("diffusion_closed_form: no closed form for the two-level model");
  }

  double value = 0.0;
  switch (env.statistics) {
    case Statistics::full_n2_plus_n: value = full; break;
    case Statistics::particle_n:     value = particle; break;
    case Statistics::wave_n2:        value = full - particle; break;
  }
  return {value, units::momentum_diffusion, 0.0, Method::closed_form};
}

// Wavenumber-space diffusion d<k^2>/dt = D / hbar^2. Where the optical
// theorem holds exactly, the equivalent |alpha|^2 omega^8 form
//   (16 / 9 pi c^8) Int omega^8 |alpha|^2 S(x) domega
// is evaluated independently and must agree to 1e-8.
inline RateResult k_space_diffusion(const PolarizabilityModel& m,
                                    const ThermalEnvironment& env,
                                    const QuadratureConfig& cfg = {}) {
  const RateResult d = diffusion_constant(m, env, cfg);
  const double h2 = constants::hbar * constants::hbar;
  double value = d.value / h2;
  double err = d.err_estimate / h2;

  if (optical_theorem_exact(m)) {
    const double omega_T = constants::thermal_omega(env.T);
    const double c = constants::c;
    const double pref = 16.0 / (9.0 * constants::pi * std::pow(c, 8.0)) *
                        std::pow(omega_T, 9.0);
    auto integrand = [&](double x) {
      if (x <= 0.0) return 0.0;
      const double a2 = std::norm(alpha(m, x * omega_T));
      return std::pow(x, 8.0) * a2 * statistics_weight(x, env.statistics);
    };
    const Integral q = integrate_semi_infinite(integrand, 1.0, cfg);
    const double other = pref * q.value;
    const double rel = std::abs(other - value) / std::abs(value);
    if (rel > 1e-8) {
      throw consistency_error("k_space_diffusion: alpha_I and |alpha|^2 routes disagree",
                              value, other, 1e-8);
    }
    err = std::max(err, rel * std::abs(value));
  }
  return {value, units::wavenumber_diffusion, err, Method::quadrature};
}

// Scattering constant Lambda for a dielectric sphere: half the particle_n
// wavenumber diffusion constant,
//   Lambda = (8 / 9 pi) 8! zeta(9) a^6 c |(eps-1)/(eps+2)|^2 (k_B T / hbar c)^9.
inline RateResult scattering_constant_lambda(const SphereModel& s, double T) {
  detail::check_env(ThermalEnvironment{T});
  detail::check_model(s);
  const double a3 = s.radius * s.radius * s.radius;
  const double pol2 = std::norm((s.epsilon - 1.0) / (s.epsilon + 2.0));
  const double kexp = std::pow(constants::thermal_wavenumber(T), 9.0);
  const double value = 8.0 / (9.0 * constants::pi) * std::tgamma(9.0) *
                       riemann_zeta(9.0) * a3 * a3 * pol2 * constants::c * kexp;
  return {value, units::wavenumber_diffusion, 0.0, Method::closed_form};
}

// Closed form of the gas-collision momentum diffusion constant:
//   D_air = (16 a^2 / 3) (N/V) sqrt(2 pi m) (k_B T)^{3/2}.
inline RateResult air_diffusion_closed_form(const AirEnvironment& env) {
  detail::check_env(env);
  const double kT = constants::k_B * env.T;
  const double value = 16.0 * env.radius * env.radius / 3.0 * env.number_density *
                       std::sqrt(2.0 * constants::pi * env.molecule_mass) *
                       std::pow(kT, 1.5);
  return {value, units::momentum_diffusion, 0.0, Method::closed_form};
}

// Momentum diffusion of a sphere from elastic collisions with gas
// molecules, by quadrature over the Maxwell-Boltzmann flux integrand.
// Cross-checked internally against the closed form to 1e-8.
inline RateResult air_diffusion(const AirEnvironment& env, const QuadratureConfig& cfg = {}) {
  detail::check_env(env);
  const double m = env.molecule_mass;
  const double kT = constants::k_B * env.T;
  const double a2 = env.radius * env.radius;
  const double sigma_mt = 2.0 * constants::pi * a2 / 3.0;  // momentum-transfer cross section
  const double norm = 4.0 * constants::pi * std::pow(2.0 * constants::pi * m * kT, -1.5);
  const double q_scale = std::sqrt(2.0 * m * kT);

  auto integrand = [&](double q) {
    const double u = q / q_scale;
    return std::pow(q, 5.0) * std::exp(-u * u);
  };
  const Integral quad = integrate(integrand, 0.0, 12.0 * q_scale, cfg,
                                  {1.0 * q_scale, 3.0 * q_scale});
  const double value = sigma_mt * env.number_density * norm / m * quad.value;

  const double closed = air_diffusion_closed_form(env).value;
  const double rel = std::abs(value - closed) / closed;
  if (rel > 1e-8) {
    throw consistency_error("air_diffusion: quadrature and closed form disagree",
                            value, closed, 1e-8);
  }
  const double pref = sigma_mt * env.number_density * norm / m;
  return {value, units::momentum_diffusion, pref * quad.err, Method::quadrature};
}

} // namespace bbrad
