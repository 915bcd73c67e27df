#pragma once

#include <cmath>
#include <complex>
#include <variant>

#include "bbrad/constants.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/result.hpp"

namespace bbrad {

// Free charge with radiation reaction (Abraham-Lorentz response).
struct ElectronModel {
  double mass = constants::m_e;
  double charge = constants::e_esu;

  double radiation_time() const {
    return 2.0 * charge * charge / (3.0 * mass * constants::c * constants::c * constants::c);
  }
};

// Dielectric sphere small compared to relevant wavelengths.
struct SphereModel {
  double radius;                 // cm
  std::complex<double> epsilon;  // relative permittivity

  bool lossless() const { return epsilon.imag() == 0.0; }
};

// Two-level system in the rotating-wave approximation.
//   omega0: transition frequency, mu: dipole matrix element (statC cm),
//   beta: half linewidth (1/s), p1/p2: lower/upper state populations.
struct TwoLevelModel {
  double omega0;
  double mu;
  double beta;
  double p1;
  double p2;
};

using PolarizabilityModel = std::variant<ElectronModel, SphereModel, TwoLevelModel>;

namespace detail {
inline void check_omega(double omega) {
  if (!(omega > 0.0)) throw domain_error("polarizability: requires omega > 0");
}
inline void check_model(const SphereModel& m) {
  if (!(m.radius > 0.0)) throw domain_error("SphereModel: radius must be positive");
  if (std::abs(m.epsilon + 2.0) < 1e-300) {
    throw domain_error("SphereModel: epsilon = -2 puts the response on resonance");
  }
}
inline void check_model(const TwoLevelModel& m) {
  if (!(m.omega0 > 0.0)) throw domain_error("TwoLevelModel: omega0 must be positive");
  if (!(m.beta > 0.0)) throw domain_error("TwoLevelModel: beta must be positive");
  if (std::abs(m.p1 + m.p2 - 1.0) > 1e-12) {
    throw domain_error("TwoLevelModel: populations must sum to 1");
  }
}
inline void check_model(const ElectronModel& m) {
  if (!(m.mass > 0.0)) throw domain_error("ElectronModel: mass must be positive");
}
} // namespace detail

// Complex dynamic polarizability alpha(omega), omega > 0.
inline std::complex<double> alpha(const ElectronModel& m, double omega) {
  detail::check_omega(omega);
  detail::check_model(m);
  const double tau = m.radiation_time();
  const std::complex<double> denom(omega * omega, tau * omega * omega * omega);
  return -(m.charge * m.charge / m.mass) / denom;
}

inline std::complex<double> alpha(const SphereModel& m, double omega) {
  detail::check_omega(omega);
  detail::check_model(m);
  const double a3 = m.radius * m.radius * m.radius;
  return a3 * (m.epsilon - 1.0) / (m.epsilon + 2.0);
}

inline std::complex<double> alpha(const TwoLevelModel& m, double omega) {
  detail::check_omega(omega);
  detail::check_model(m);
  // Rotating-wave resonance denominator; sign convention makes Im alpha > 0
  // for a ground-state-dominated population (absorber).
  const std::complex<double> denom(m.omega0 - omega, -m.beta);
  return (m.mu * m.mu / (3.0 * constants::hbar)) * (m.p1 - m.p2) / denom;
}

inline std::complex<double> alpha(const PolarizabilityModel& m, double omega) {
  return std::visit([omega](const auto& mm) { return alpha(mm, omega); }, m);
}

// Imaginary part of the response entering absorption/scattering rates.
// For a strictly real (lossless) response the radiative damping of the
// induced dipole supplies the scattering part via the optical theorem:
//   alpha_I = (2/3) (omega/c)^3 |alpha|^2.
struct AlphaIEff {
  double value;
  bool from_radiative_reaction;  // true when Im alpha == 0 and the
                                 // scattering form was substituted
  bool negative;                 // true when Im alpha < 0 (gain medium)
};

inline AlphaIEff alpha_I_effective(const PolarizabilityModel& m, double omega) {
  const std::complex<double> a = alpha(m, omega);
  const double im = a.imag();
  if (im > 0.0) return {im, false, false};
  if (im < 0.0) return {im, false, true};
  const double k = omega / constants::c;
  return {2.0 / 3.0 * k * k * k * std::norm(a), true, false};
}

// True when Im alpha is exactly the radiative (scattering) part, so the
// optical-theorem identity sigma = (4 pi omega / c) alpha_I holds without
// a separate absorption channel.
inline bool optical_theorem_exact(const PolarizabilityModel& m) {
  if (std::holds_alternative<ElectronModel>(m)) return true;
  if (const auto* s = std::get_if<SphereModel>(&m)) return s->lossless();
  return false;
}

// Total scattering cross section sigma(omega) = (8 pi / 3)(omega/c)^4 |alpha|^2.
// Where the optical theorem applies exactly, the equivalent form
// (4 pi omega / c) alpha_I is evaluated too and must agree to 1e-12.
inline RateResult rayleigh_cross_section(const PolarizabilityModel& m, double omega) {
  const std::complex<double> a = alpha(m, omega);
  const double k = omega / constants::c;
  const double k4 = k * k * k * k;
  const double sigma = 8.0 * constants::pi / 3.0 * k4 * std::norm(a);
  double err = 0.0;
  if (optical_theorem_exact(m)) {
    const double via_alpha_I = 4.0 * constants::pi * k * alpha_I_effective(m, omega).value;
    const double rel = std::abs(via_alpha_I - sigma) / sigma;
    if (rel > 1e-12) {
      throw consistency_error("rayleigh_cross_section: optical-theorem routes disagree",
                              sigma, via_alpha_I, 1e-12);
    }
    err = rel * sigma;
  }
  return {sigma, units::area, err, Method::closed_form};
}

// Differential cross section d sigma / d Omega for unpolarized thermal light,
// summed over final polarizations: k^4 |alpha|^2 (1 + cos^2 theta) / 2.
inline double differential_cross_section(const PolarizabilityModel& m, double omega,
                                         double cos_theta) {
  if (std::abs(cos_theta) > 1.0) {
    throw domain_error("differential_cross_section: |cos theta| must not exceed 1");
  }
  const std::complex<double> a = alpha(m, omega);
  const double k = omega / constants::c;
  const double k4 = k * k * k * k;
  return k4 * std::norm(a) * 0.5 * (1.0 + cos_theta * cos_theta);
}

} // namespace bbrad
