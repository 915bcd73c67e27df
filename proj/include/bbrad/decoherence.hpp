#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/special.hpp"

namespace bbrad {

// Two point dipoles separated by |x1 - x2| = d; isotropy of the thermal
// field makes the separation magnitude the only geometric parameter.
struct DipolePairGeometry {
  double separation;  // cm, >= 0
};

// Angular double integral over emission directions of the two dipoles,
//   I(x) = Int dOmega dOmega' exp(i x (khat - khat') . dhat) (1 + cos^2 theta),
// reduced to spherical Bessel functions by the tensor decomposition of
// the plane-wave average (transverse j1/x and longitudinal j0 - 2 j1/x
// parts):
//   I(x) = 16 pi^2 [ j0^2 + 2 (j1/x)^2 + (j0 - 2 j1/x)^2 ].
// The reduction is validated against brute-force 4D cubature in the tests.
inline double angular_kernel(double x) {
  if (x < 0.0) throw domain_error("angular_kernel: requires x >= 0");
  const double j0 = spherical_bessel(0, x);
  const double j1x = spherical_bessel_j1_over_x(x);
  const double t = j0 - 2.0 * j1x;
  return 16.0 * constants::pi * constants::pi * (j0 * j0 + 2.0 * j1x * j1x + t * t);
}

struct EmissionRates {
  RateResult r11;  // single-dipole photon emission rate
  RateResult r12;  // two-dipole interference rate
};

namespace detail {

// R12(d) = (c / 8 pi^3) Int dk k^6 |alpha(ck)|^2 n(hbar c k / k_B T) I(k d).
// d = 0 reproduces R11 exactly (the kernel is evaluated the same way), so
// F(0) vanishes identically rather than to quadrature tolerance.
inline RateResult emission_rate_at(const PolarizabilityModel& m, double T, double d,
                                   const QuadratureConfig& cfg) {
  if (!(T > 0.0)) throw domain_error("emission_rates: T must be positive");
  if (d < 0.0) throw domain_error("emission_rates: separation must be nonnegative");
  const double kbar = constants::thermal_wavenumber(T);  // k_B T / hbar c
  const double dk = d * kbar;
  const double pref = constants::c / (8.0 * std::pow(constants::pi, 3.0)) *
                      std::pow(kbar, 7.0);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double omega = x * kbar * constants::c;
    const double a2 = std::norm(alpha(m, omega));
    return std::pow(x, 6.0) * a2 * bose_occupation(x) * angular_kernel(x * dk);
  };
  // The kernel oscillates with period ~pi in its argument; seed panel edges
  // at that spacing when the separation makes the integrand oscillatory.
  std::vector<double> breaks = resonance_breakpoints(m, kbar * constants::c);
  if (dk > 1.0) {
    const double step = constants::pi / dk;
    const double upper = cfg.tail_cutoff;
    for (double x = step; x < upper; x += step) {
      breaks.push_back(x);
      if (breaks.size() > 4000) {
        throw convergence_error(
            "emission_rates: separation too large for the oscillation budget", 0.0, 0.0);
      }
    }
  }
  const Integral q = integrate_semi_infinite(integrand, 1.0, cfg, std::move(breaks));
  return {pref * q.value, units::rate, pref * q.err, Method::quadrature};
}

// Flux-form rewrite of R11: Int dq rho(q) c sigma(cq), with the photon
// number density per wavenumber rho(q) = q^2 n / pi^2 and the angular
// average done on the differential cross section. Independent route used
// as a consistency gate.
inline double emission_rate_flux_form(const PolarizabilityModel& m, double T,
                                      const QuadratureConfig& cfg) {
  const double kbar = constants::thermal_wavenumber(T);
  const GaussLegendre gl = gauss_legendre(16);
  const double pref = constants::c / (constants::pi * constants::pi) *
                      std::pow(kbar, 3.0);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double omega = x * kbar * constants::c;
    // sigma = 2 pi Int dmu dsigma/dOmega, exact under Gauss-Legendre since
    // the polarization-summed angular factor is quadratic in mu.
    double sigma = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      sigma += gl.w[i] * differential_cross_section(m, omega, gl.x[i]);
    }
    sigma *= 2.0 * constants::pi;
    return x * x * bose_occupation(x) * sigma;
  };
  const Integral q = integrate_semi_infinite(integrand, 1.0, cfg,
                                             resonance_breakpoints(m, kbar * constants::c));
  return pref * q.value;
}

} // namespace detail

// R11 and R12 for a dipole pair. Only the normally-ordered field terms
// contribute to the interference rate, so the occupation weight here is
// the plain n (particle statistics), unlike the full momentum-diffusion
// constant which carries n^2 + n.
inline EmissionRates emission_rates(const PolarizabilityModel& m, double T,
                                    const DipolePairGeometry& geom,
                                    const QuadratureConfig& cfg = {}) {
  RateResult r11 = detail::emission_rate_at(m, T, 0.0, cfg);
  const double flux = detail::emission_rate_flux_form(m, T, cfg);
  const double rel = std::abs(flux - r11.value) / r11.value;
  if (rel > 1e-8) {
    throw consistency_error("emission_rates: kernel and flux parameterizations disagree",
                            r11.value, flux, 1e-8);
  }
  r11.err_estimate = std::max(r11.err_estimate, rel * r11.value);
  RateResult r12 = geom.separation == 0.0
                       ? r11
                       : detail::emission_rate_at(m, T, geom.separation, cfg);
  return {r11, r12};
}

// Decoherence factor F(d) = R11 - R12. Nonnegative up to quadrature error.
inline RateResult decoherence_factor(const PolarizabilityModel& m, double T, double d,
                                     const QuadratureConfig& cfg = {}) {
  const EmissionRates r = emission_rates(m, T, DipolePairGeometry{d}, cfg);
  const double f = r.r11.value - r.r12.value;
  const double err = r.r11.err_estimate + r.r12.err_estimate;
  if (f < -err) {
    throw consistency_error("decoherence_factor: negative beyond quadrature error",
                            r.r11.value, r.r12.value, err);
  }
  return {f, units::rate, err, Method::quadrature};
}

// Small-separation curvature of F: F(d) -> Lambda d^2 as d -> 0.
// Lambda is extracted at d = lambda_th/100 and lambda_th/200 (thermal
// wavelength lambda_th = hbar c / k_B T) and Richardson-extrapolated in d^2.
inline RateResult lambda_from_limit(const PolarizabilityModel& m, double T,
                                    const QuadratureConfig& cfg = {}) {
  const double lam = 1.0 / constants::thermal_wavenumber(T);
  const double d1 = lam / 100.0;
  const double d2 = lam / 200.0;
  const RateResult f1 = decoherence_factor(m, T, d1, cfg);
  const RateResult f2 = decoherence_factor(m, T, d2, cfg);
  const double a1 = f1.value / (d1 * d1);
  const double a2 = f2.value / (d2 * d2);
  const double extrapolated = (4.0 * a2 - a1) / 3.0;  // removes the O(d^2) term
  const double residual = std::abs(extrapolated - a2);
  const double quad_err = f1.err_estimate / (d1 * d1) + f2.err_estimate / (d2 * d2);
  if (!(extrapolated > 0.0) || residual > 0.05 * std::abs(extrapolated)) {
    throw convergence_error("lambda_from_limit: curvature extraction failed",
                            extrapolated, residual);
  }
  return {extrapolated, units::wavenumber_diffusion, residual / 3.0 + quad_err,
          Method::quadrature};
}

// Sampled decoherence curve plus the extracted small-separation curvature.
struct DecoherenceCurve {
  std::vector<double> separations;  // cm
  std::vector<double> F_values;    // 1/s
  double lambda_fit;               // 1/cm^2/s
  double lambda_residual;
};

inline DecoherenceCurve decoherence_curve(const PolarizabilityModel& m, double T,
                                          const std::vector<double>& separations,
                                          const QuadratureConfig& cfg = {}) {
  DecoherenceCurve curve;
  curve.separations = separations;
  curve.F_values.reserve(separations.size());
  for (double d : separations) {
    curve.F_values.push_back(decoherence_factor(m, T, d, cfg).value);
  }
  const RateResult lam = lambda_from_limit(m, T, cfg);
  curve.lambda_fit = lam.value;
  curve.lambda_residual = lam.err_estimate;
  return curve;
}

} // namespace bbrad
