#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/decoherence.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/drag.hpp"
#include "bbrad/equilibrium.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/special.hpp"
#include "bbrad/stochastic.hpp"

// Cross-validation suite. Every check compares independent numerical routes
// of one module (quadrature vs closed form, reduction vs brute force,
// stochastic vs analytic) under the tolerance that gates a release.
// run_verification() executes all of them; failures carry the measured
// residual so regressions are diagnosable from the table alone.

namespace bbrad {

struct CheckResult {
  int id;
  std::string name;
  bool pass;
  double measured;  // worst residual observed (normalized where noted)
  double bound;     // acceptance threshold on measured
  std::string detail;
  double seconds;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  double total_seconds() const {
    double s = 0.0;
    for (const auto& c : checks) s += c.seconds;
    return s;
  }
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Brute-force 4D cubature of the angular kernel
//   I(x) = Int dOmega dOmega' cos(x (mu - mu')) (1 + cos^2 Theta),
// cos Theta = mu mu' + sqrt(1-mu^2) sqrt(1-mu'^2) cos(phi - phi').
// Gauss-Legendre in both polar cosines, trapezoid in both azimuths; the
// azimuthal dependence is a degree-2 trig polynomial, so the periodic
// trapezoid sum is exact, and GL-48 resolves e^{i x mu} for x <= 10 to
// machine precision. Oracle only; the library path is the Bessel reduction.
inline double kernel_cubature(double x) {
  const GaussLegendre gl = gauss_legendre(48);
  constexpr int nphi = 12;
  double cphi[nphi], sphi[nphi];
  for (int k = 0; k < nphi; ++k) {
    const double phi = 2.0 * constants::pi * k / nphi;
    cphi[k] = std::cos(phi);
    sphi[k] = std::sin(phi);
  }
  const double wphi = 2.0 * constants::pi / nphi;

  double total = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    const double mu1 = gl.x[i];
    const double s1 = std::sqrt(std::max(0.0, 1.0 - mu1 * mu1));
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double mu2 = gl.x[j];
      const double s2 = std::sqrt(std::max(0.0, 1.0 - mu2 * mu2));
      const double osc = std::cos(x * (mu1 - mu2));
      double ang = 0.0;
      for (int k1 = 0; k1 < nphi; ++k1) {
        for (int k2 = 0; k2 < nphi; ++k2) {
          const double cd = cphi[k1] * cphi[k2] + sphi[k1] * sphi[k2];
          const double ct = mu1 * mu2 + s1 * s2 * cd;
          ang += 1.0 + ct * ct;
        }
      }
      total += gl.w[i] * gl.w[j] * osc * ang * wphi * wphi;
    }
  }
  return total;
}

} // namespace detail

inline VerificationReport run_verification(std::uint64_t seed = 20260818ULL) {
  using clock = std::chrono::steady_clock;
  VerificationReport rep;

  const PolarizabilityModel electron = ElectronModel{constants::m_e, constants::e_esu};
  const SphereModel sphere_model{1e-6, {2.1, 0.0}};
  const PolarizabilityModel sphere = sphere_model;

  const auto run = [&rep](int id, const char* name, auto&& body) {
    CheckResult r;
    r.id = id;
    r.name = name;
    r.pass = false;
    r.measured = std::nan("");
    r.bound = 0.0;
    const auto t0 = clock::now();
    try {
      body(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    rep.checks.push_back(std::move(r));
  };

  run(1, "electron diffusion: quadrature vs closed form", [&](CheckResult& r) {
    double worst = 0.0;
    for (double T : {3.0, 300.0, 3000.0}) {
      const ThermalEnvironment env{T, Statistics::full_n2_plus_n};
      const double q = diffusion_constant(electron, env).value;
      const double cf = diffusion_closed_form(electron, env).value;
      worst = std::max(worst, std::abs(q - cf) / cf);
    }
    r.measured = worst;
    r.bound = 1e-8;
    r.pass = worst <= r.bound;
    r.detail = "T = 3, 300, 3000 K";
  });

  run(2, "statistics ratios: particle share of the full constant", [&](CheckResult& r) {
    struct Case {
      const PolarizabilityModel* m;
      const char* label;
      double lo, hi;
    };
    const Case cases[] = {{&electron, "electron", 0.9570, 0.9580},
                          {&sphere, "sphere", 0.9978, 0.9982}};
    double worst_outside = 0.0;
    std::string detail;
    bool ok = true;
    for (const Case& cs : cases) {
      auto ratio_at = [&](double T) {
        const double p = diffusion_constant(*cs.m, {T, Statistics::particle_n}).value;
        const double f = diffusion_constant(*cs.m, {T, Statistics::full_n2_plus_n}).value;
        return p / f;
      };
      const double ratio = ratio_at(300.0);
      const double drift = std::abs(ratio_at(3000.0) - ratio);
      const double outside = std::max({0.0, ratio - cs.hi, cs.lo - ratio});
      worst_outside = std::max(worst_outside, outside);
      const bool in_band = outside == 0.0 && drift <= 1e-9;
      ok = ok && in_band;
      detail += std::string(cs.label) + " " + detail::fmt(ratio) +
                (outside == 0.0 ? " inside [" : " OUTSIDE [") + detail::fmt(cs.lo) + ", " +
                detail::fmt(cs.hi) + "]";
      if (outside > 0.0) detail += " by " + detail::fmt(outside);
      detail += "; ";
    }
    r.measured = worst_outside;
    r.bound = 0.0;
    r.pass = ok;
    r.detail = detail + "T-independence drift <= 1e-9";
  });

  run(3, "sphere wavenumber diffusion and scattering constant", [&](CheckResult& r) {
    const double T = 300.0;
    const double h2 = constants::hbar * constants::hbar;
    const double kq = k_space_diffusion(sphere, {T, Statistics::full_n2_plus_n}).value;
    const double kc = diffusion_closed_form(sphere, {T, Statistics::full_n2_plus_n}).value / h2;
    const double rel_k = std::abs(kq - kc) / kc;

    const double lam = scattering_constant_lambda(sphere_model, T).value;
    const double half_part_closed =
        0.5 * diffusion_closed_form(sphere, {T, Statistics::particle_n}).value / h2;
    const double rel_construct = std::abs(lam - half_part_closed) / lam;
    const double half_part_quad =
        0.5 * k_space_diffusion(sphere, {T, Statistics::particle_n}).value;
    const double rel_quad = std::abs(lam - half_part_quad) / lam;

    r.measured = std::max(rel_k, rel_quad);
    r.bound = 1e-8;
    r.pass = r.measured <= r.bound && rel_construct <= 1e-12;
    r.detail = "K full vs closed " + detail::fmt(rel_k) + "; Lambda vs half particle: closed " +
               detail::fmt(rel_construct) + ", quadrature " + detail::fmt(rel_quad);
  });

  run(4, "decoherence kernel vs 4D cubature; far-separation envelope", [&](CheckResult& r) {
    double worst = 0.0;
    for (double x : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double oracle = detail::kernel_cubature(x);
      const double reduced = angular_kernel(x);
      worst = std::max(worst, std::abs(reduced - oracle) / std::abs(oracle));
    }

    const double T = 300.0;
    const EmissionRates r0 = emission_rates(sphere, T, DipolePairGeometry{0.0});
    const double f0 = r0.r11.value - r0.r12.value;

    // Separation placing k d = 50 at the peak of the emission integrand
    // x^6 |alpha|^2 n(x) (|alpha| is flat for the lossless sphere).
    double x_peak = 1.0, best = 0.0;
    for (double x = 0.5; x <= 25.0; x += 1e-3) {
      const double v = std::pow(x, 6.0) * bose_occupation(x);
      if (v > best) {
        best = v;
        x_peak = x;
      }
    }
    const double kbar = constants::thermal_wavenumber(T);
    const double d50 = 50.0 / (x_peak * kbar);
    const EmissionRates far = emission_rates(sphere, T, DipolePairGeometry{d50});
    // Envelope bound: kernel magnitude never exceeds 32 pi^2 / x^2.
    const double dk = d50 * kbar;
    auto env_integrand = [&](double x) {
      if (x <= 0.0) return 0.0;
      const double a2 = std::norm(alpha(sphere, x * kbar * constants::c));
      return std::pow(x, 6.0) * a2 * bose_occupation(x) * 32.0 * constants::pi *
             constants::pi / (x * dk * (x * dk));
    };
    const double env_pref =
        constants::c / (8.0 * std::pow(constants::pi, 3.0)) * std::pow(kbar, 7.0);
    const double env_bound = env_pref * integrate_semi_infinite(env_integrand, 1.0).value;
    const bool envelope_ok = std::abs(far.r12.value) <= env_bound &&
                             angular_kernel(50.0) <= 32.0 * constants::pi * constants::pi / 2500.0;

    r.measured = worst;
    r.bound = 1e-6;
    r.pass = worst <= r.bound && f0 == 0.0 && envelope_ok;
    r.detail = "x in {0, 0.5, 1, 2, 5, 10}; F(0) = " + detail::fmt(f0) + " exactly; |R12(kd=50)| = " +
               detail::fmt(std::abs(far.r12.value)) + " <= envelope " + detail::fmt(env_bound);
  });

  run(5, "small-separation curvature vs scattering constant", [&](CheckResult& r) {
    double worst = 0.0;
    for (double T : {100.0, 300.0, 1000.0}) {
      const double lam_q = lambda_from_limit(sphere, T).value;
      const double lam_c = scattering_constant_lambda(sphere_model, T).value;
      worst = std::max(worst, std::abs(lam_q - lam_c) / lam_c);
    }
    r.measured = worst;
    r.bound = 1e-2;
    r.pass = worst <= r.bound;
    r.detail = "T = 100, 300, 1000 K; Richardson in d^2 at d = lambda_th/100, /200";
  });

  run(6, "drag closed forms: electron and sphere", [&](CheckResult& r) {
    double worst = 0.0;
    for (const PolarizabilityModel* m : {&electron, &sphere}) {
      const double q = drag_coefficient_nonrel(*m, 300.0).force_per_velocity.value;
      const double cf = drag_closed_form(*m, 300.0).value;
      worst = std::max(worst, std::abs(q - cf) / cf);
    }
    r.measured = worst;
    r.bound = 1e-8;
    r.pass = worst <= r.bound;
  });

  run(7, "fluctuation-dissipation balance", [&](CheckResult& r) {
    double worst = 0.0;
    for (const PolarizabilityModel* m : {&electron, &sphere}) {
      const double T = 300.0;
      const double D = diffusion_constant(*m, {T, Statistics::full_n2_plus_n}).value;
      const double mxi = drag_coefficient_nonrel(*m, T).force_per_velocity.value;
      worst = std::max(worst, std::abs(D - 2.0 * mxi * constants::k_B * T) / D);
    }
    r.measured = worst;
    r.bound = 1e-6;
    r.pass = worst <= r.bound;
    r.detail = "D_full = 2 (m xi) k_B T, both sides by quadrature";
  });

  run(8, "relativistic force: dual route; v->0 slope", [&](CheckResult& r) {
    const double T = 300.0;
    double worst = 0.0;
    for (double vc : {0.1, 0.5, 0.9}) {
      for (double tr : {0.5, 1.0, 2.0}) {
        const auto st = RelativisticState::make(vc * constants::c, T, tr * T);
        const double a = total_force_relativistic(st, electron).value;
        const double b = total_force_composed(st, electron).value;
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
      }
    }

    // Richardson in v^2: the force is odd in v, so F/v has only even error
    // terms. Both candidate slopes: the full n(n+1) occupation-derivative
    // weight and the bare-n weight that drops the stimulated piece.
    const double h = 1e-3 * constants::c;
    const double s1 = total_force_relativistic(RelativisticState::make(h, T, T), electron).value / h;
    const double s2 =
        total_force_relativistic(RelativisticState::make(2.0 * h, T, T), electron).value / (2.0 * h);
    const double slope = (4.0 * s1 - s2) / 3.0;
    const double cand_full = -drag_coefficient_nonrel(electron, T).force_per_velocity.value;
    const double omega_T = constants::thermal_omega(T);
    const double c5 = std::pow(constants::c, 5.0);
    auto bare_n = [&](double x) {
      if (x <= 0.0) return 0.0;
      return std::pow(x, 5.0) * detail::alpha_I_for_drag(electron, x * omega_T) *
             bose_occupation(x);
    };
    const double cand_bare = -4.0 * constants::hbar / (3.0 * constants::pi * c5) *
                             std::pow(omega_T, 5.0) *
                             integrate_semi_infinite(bare_n, 1.0).value;
    const double rel_full = std::abs(slope - cand_full) / std::abs(cand_full);
    const double rel_bare = std::abs(slope - cand_bare) / std::abs(cand_bare);

    r.measured = worst;
    r.bound = 1e-6;
    r.pass = worst <= r.bound && rel_full <= 1e-4;
    r.detail = "grid v/c x T'/T, 9 points; slope matches full-weight candidate to " +
               detail::fmt(rel_full) + ", bare-n candidate off by " + detail::fmt(rel_bare);
  });

  run(9, "spectrum ODE triad; equilibrium residual", [&](CheckResult& r) {
    const double T = 300.0;
    const double omega_T = constants::thermal_omega(T);
    std::vector<double> grid(60);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = 0.1 * std::pow(200.0, static_cast<double>(i) / (grid.size() - 1));
      grid[i] = x * omega_T;
    }
    struct Branch {
      SpectrumBranch b;
      double n0;
    };
    const Branch branches[] = {{SpectrumBranch::wien, std::exp(-1.0)},
                               {SpectrumBranch::rayleigh_jeans, 1.0},
                               {SpectrumBranch::planck, 1.0 / std::expm1(1.0)}};
    double worst = 0.0;
    for (const Branch& br : branches) {
      const SpectrumSolution sol = spectrum_ode_solve(br.b, T, omega_T, br.n0, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i] / omega_T;
        const double exact = spectrum_analytic(br.b, 1.0, br.n0, x);
        worst = std::max(worst, std::abs(sol.n_values[i] - exact) / exact);
      }
    }
    const double res_e = std::abs(equilibrium_residual(electron, T));
    const double res_s = std::abs(equilibrium_residual(sphere, T));
    r.measured = std::max({worst, res_e, res_s});
    r.bound = 1e-6;
    r.pass = r.measured <= r.bound;
    r.detail = "three branches, 60 points on x in [0.1, 20]; |residual| electron " +
               detail::fmt(res_e) + ", sphere " + detail::fmt(res_s);
  });

  run(10, "Fokker-Planck relaxation; OU moment tracking", [&](CheckResult& r) {
    const double mass = 1e-17, T = 300.0, xi = 1.0;
    const double vth = std::sqrt(constants::k_B * T / mass);
    const double v0 = 2.0 * vth, sig0 = 0.7 * vth;
    const double dt = 5e-4 / xi;
    VelocityDistribution f =
        gaussian_distribution(velocity_grid(mass, T, 4096, 8.0), mass, T, xi, v0, sig0);

    double worst_moment = 0.0;
    double t_prev = 0.0;
    for (double tc : {0.5, 1.0, 2.0}) {
      f = fokker_planck_evolve(f, xi, mass, T, (tc - t_prev) / xi, dt);
      t_prev = tc;
      const double m_ref = ou_mean(v0, xi, tc / xi);
      const double v_ref = ou_variance(sig0 * sig0, xi, mass, T, tc / xi);
      worst_moment = std::max(worst_moment, std::abs(f.mean() - m_ref) / std::abs(m_ref));
      worst_moment = std::max(worst_moment, std::abs(f.variance() - v_ref) / v_ref);
    }
    f = fokker_planck_evolve(f, xi, mass, T, (10.0 - t_prev) / xi, dt);
    const VelocityDistribution mb = maxwell_boltzmann(f.v, mass, T, xi);
    double l1 = 0.0;
    const double inv_norm = 1.0 / f.norm();
    for (std::size_t i = 0; i < f.f.size(); ++i) {
      l1 += std::abs(f.f[i] * inv_norm - mb.f[i] / mb.norm()) * f.dv();
    }
    r.measured = worst_moment;
    r.bound = 1e-4;
    r.pass = worst_moment <= r.bound && l1 <= 1e-3;
    r.detail = "moments at xi t = 0.5, 1, 2; L1 to Maxwell-Boltzmann at xi t = 10: " +
               detail::fmt(l1) + " <= 1e-3";
  });

  run(11, "kick Monte Carlo vs diffusion constant; recoil moment", [&](CheckResult& r) {
    const double T = 300.0;
    const double omega_T = constants::thermal_omega(T);
    const double c3 = std::pow(constants::c, 3.0);
    auto rate_density = [&](double x) {
      if (x <= 0.0) return 0.0;
      const double omega = x * omega_T;
      return 4.0 * std::pow(omega, 3.0) * bose_occupation(x) *
             alpha_I_effective(electron, omega).value / (constants::pi * c3) * omega_T;
    };
    const double rate_total = integrate_semi_infinite(rate_density, 1.0).value;
    KickProcessSpec spec;
    spec.model = electron;
    spec.T = T;
    spec.duration = 1e6 / (64.0 * rate_total);  // ~1e6 kicks across 64 paths
    spec.beta = 30.0 / spec.duration;
    spec.seed = seed;
    const KickSimulationResult a = simulate_kicks(spec);
    const KickSimulationResult b = simulate_kicks(spec);
    const bool bit_identical =
        a.msq_momentum.value == b.msq_momentum.value && a.total_kicks == b.total_kicks;

    const double d_ref = diffusion_closed_form(electron, {T, Statistics::particle_n}).value;
    const double dev = std::abs(a.diffusion_estimate.value - d_ref);
    const double three_sigma = 3.0 * a.diffusion_estimate.err_estimate;

    const RecoilMoment rec = recoil_second_moment(RecoilSampling::paper_uniform, 1000000, seed);
    const double rec_dev = std::abs(rec.value - 2.0 / 3.0);
    const bool rec_ok = rec_dev <= 3.0 * rec.standard_error;

    r.measured = dev / d_ref;
    r.bound = three_sigma / d_ref;
    r.pass = dev <= three_sigma && bit_identical && rec_ok && !a.precision_warning;
    r.detail = detail::fmt(a.total_kicks) + " kicks; relative SE " + detail::fmt(a.relative_se) +
               "; bit-identical rerun " + (bit_identical ? "yes" : "NO") +
               "; recoil moment " + detail::fmt(rec.value) + " +- " +
               detail::fmt(rec.standard_error);
  });

  run(12, "gas collision diffusion: quadrature vs closed form", [&](CheckResult& r) {
    AirEnvironment env;
    env.T = 300.0;
    env.molecule_mass = 28.97 * constants::amu;
    env.number_density = 2.446e19;
    env.radius = 1e-5;
    const double q = air_diffusion(env).value;
    const double cf = air_diffusion_closed_form(env).value;
    r.measured = std::abs(q - cf) / cf;
    r.bound = 1e-8;
    r.pass = r.measured <= r.bound;
  });

  run(13, "field-gradient statistical independence", [&](CheckResult& r) {
    FieldSampleSpec fs;
    fs.mode_count = 128;
    fs.sample_count = 10000;
    fs.seed = seed;
    const IndependenceReport pos = gaussian_independence_test(fs, false);
    const IndependenceReport neg = gaussian_independence_test(fs, true);
    r.measured = std::max(std::abs(pos.correlation) / pos.correlation_bound,
                          pos.max_cf_deviation / pos.cf_bound);
    r.bound = 1.0;
    r.pass = pos.pass && !neg.factorization_pass;
    r.detail = "corr " + detail::fmt(pos.correlation) + " (bound " +
               detail::fmt(pos.correlation_bound) + "), CF deviation " +
               detail::fmt(pos.max_cf_deviation) + " (bound " + detail::fmt(pos.cf_bound) +
               "); negative control deviation " + detail::fmt(neg.max_cf_deviation) +
               (neg.factorization_pass ? " UNEXPECTEDLY PASSED" : " fails as required");
  });

  return rep;
}

inline void print_table(std::ostream& os, const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%s  %2d  %-55s  measured %-12.6g bound %-12.6g %8.3f s",
                  c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.measured, c.bound,
                  c.seconds);
    os << line << "\n";
    if (!c.detail.empty()) os << "          " << c.detail << "\n";
  }
  char total[80];
  std::snprintf(total, sizeof total, "%s in %.1f s",
                rep.all_pass() ? "all checks passed" : "FAILURES PRESENT",
                rep.total_seconds());
  os << total << "\n";
}

} // namespace bbrad
