#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/drag.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/special.hpp"

namespace bbrad {

enum class SpectrumBranch { wien, rayleigh_jeans, planck };

inline const char* branch_name(SpectrumBranch b) {
  switch (b) {
    case SpectrumBranch::wien:           return "wien";
    case SpectrumBranch::rayleigh_jeans: return "rayleigh_jeans";
    case SpectrumBranch::planck:         return "planck";
  }
  return "unknown";
}

// Each occupation weight in the diffusion integrand balances drag exactly
// when the spectrum solves the matching ODE branch: n -> Wien,
// n^2 -> Rayleigh-Jeans, n^2 + n -> Planck.
inline SpectrumBranch branch_for_statistics(Statistics s) {
  switch (s) {
    case Statistics::particle_n:     return SpectrumBranch::wien;
    case Statistics::wave_n2:        return SpectrumBranch::rayleigh_jeans;
    case Statistics::full_n2_plus_n: return SpectrumBranch::planck;
  }
  throw domain_error("branch_for_statistics: unknown statistics");
}

struct SpectrumSolution {
  std::vector<double> omega_grid;
  std::vector<double> n_values;
  SpectrumBranch branch;
  // Branch invariant fixed by the anchor: Wien n e^x, Rayleigh-Jeans
  // 1/n - x, Planck (1 + 1/n) e^{-x}; all constant along the solution.
  double integration_constant;
};

namespace detail {

inline double spectrum_rhs(SpectrumBranch branch, double n) {
  switch (branch) {
    case SpectrumBranch::wien:           return -n;
    case SpectrumBranch::rayleigh_jeans: return -n * n;
    case SpectrumBranch::planck:         return -(n * n + n);
  }
  return 0.0;
}

// Adaptive Dormand-Prince 5(4) for the scalar spectrum ODE in
// x = hbar omega / k_B T, from (x0, n0) to x1.
inline double dp54_advance(SpectrumBranch branch, double x0, double n0, double x1,
                           double rel_tol) {
  if (x0 == x1) return n0;
  double x = x0, n = n0;
  double h = (x1 - x0) * 0.1;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  int steps = 0;
  while (dir * (x1 - x) > 0.0) {
    if (dir * (x + h - x1) > 0.0) h = x1 - x;
    const double k1 = spectrum_rhs(branch, n);
    const double k2 = spectrum_rhs(branch, n + h * (1.0 / 5.0) * k1);
    const double k3 = spectrum_rhs(branch, n + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const double k4 = spectrum_rhs(branch,
        n + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
    const double k5 = spectrum_rhs(branch,
        n + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    const double k6 = spectrum_rhs(branch,
        n + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                 49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5));
    const double n5 = n + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                               125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                               11.0 / 84.0 * k6);
    const double k7 = spectrum_rhs(branch, n5);
    const double n4 = n + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                               393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                               187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
    const double err = std::abs(n5 - n4);
    const double tol = rel_tol * std::max(std::abs(n), std::abs(n5)) + 1e-300;
    if (err <= tol) {
      x += h;
      n = n5;
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x))) {
      throw convergence_error("spectrum_ode_solve: step size underflow (stiff anchor)", n, err);
    }
    if (++steps > 1000000) {
      throw convergence_error("spectrum_ode_solve: step budget exhausted", n, err);
    }
  }
  return n;
}

} // namespace detail

// Analytic solution of the branch ODE through the anchor (x0, n0),
// in the dimensionless variable x.
inline double spectrum_analytic(SpectrumBranch branch, double x0, double n0, double x) {
  switch (branch) {
    case SpectrumBranch::wien:
      return n0 * std::exp(-(x - x0));
    case SpectrumBranch::rayleigh_jeans: {
      const double inv = 1.0 / n0 + (x - x0);
      if (inv <= 0.0) throw domain_error("spectrum_analytic: Rayleigh-Jeans pole crossed");
      return 1.0 / inv;
    }
    case SpectrumBranch::planck: {
      const double C = (1.0 + n0) / n0 * std::exp(-x0);
      const double denom = C * std::exp(x) - 1.0;
      if (denom <= 0.0) throw domain_error("spectrum_analytic: Planck branch constant crossed");
      return 1.0 / denom;
    }
  }
  throw domain_error("spectrum_analytic: unknown branch");
}

// Integrates the branch ODE dn/dx = -(n | n^2 | n^2+n) from the anchor
// (omega0, n0) to every grid frequency, adaptive RK with the requested
// relative tolerance.
inline SpectrumSolution spectrum_ode_solve(SpectrumBranch branch, double T, double omega0,
                                           double n0, const std::vector<double>& grid,
                                           double rel_tol = 1e-10) {
  if (!(T > 0.0)) throw domain_error("spectrum_ode_solve: T must be positive");
  if (!(omega0 > 0.0)) throw domain_error("spectrum_ode_solve: omega0 must be positive");
  if (!(n0 > 0.0)) throw domain_error("spectrum_ode_solve: n0 must be positive");
  if (grid.empty()) throw domain_error("spectrum_ode_solve: empty grid");

  const double omega_T = constants::thermal_omega(T);
  const double x0 = omega0 / omega_T;

  // March outward from the anchor in both directions; each grid point is
  // reached by continuing from the previously solved neighbor.
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  std::vector<double> n_out(grid.size());
  const auto solve_sweep = [&](bool upward) {
    double x = x0, n = n0;
    if (upward) {
      for (std::size_t idx : order) {
        const double xt = grid[idx] / omega_T;
        if (xt < x0) continue;
        n = detail::dp54_advance(branch, x, n, xt, rel_tol);
        x = xt;
        n_out[idx] = n;
      }
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const double xt = grid[*it] / omega_T;
        if (xt >= x0) continue;
        if (!(xt > 0.0)) throw domain_error("spectrum_ode_solve: grid frequencies must be positive");
        n = detail::dp54_advance(branch, x, n, xt, rel_tol);
        x = xt;
        n_out[*it] = n;
      }
    }
  };
  solve_sweep(true);
  solve_sweep(false);

  double constant = 0.0;
  switch (branch) {
    case SpectrumBranch::wien:           constant = n0 * std::exp(x0); break;
    case SpectrumBranch::rayleigh_jeans: constant = 1.0 / n0 - x0; break;
    case SpectrumBranch::planck:         constant = (1.0 + 1.0 / n0) * std::exp(-x0); break;
  }
  return {grid, std::move(n_out), branch, constant};
}

// Which spectrum is substituted into the equilibrium balance.
enum class Occupancy { planck, wien };

// Thermal-equilibrium balance residual: with S the full n^2+n weight,
//   residual = [ D_full/2 - k_B T * (m xi) ] / (D_full/2),
// both sides from quadrature. Zero for the Planck occupation; positive for
// the Wien spectrum, whose drag side is underpowered against full
// diffusion (the n^2 piece is missing from the Wien ODE).
inline double equilibrium_residual(const PolarizabilityModel& m, double T,
                                   const QuadratureConfig& cfg = {},
                                   Occupancy occ = Occupancy::planck) {
  if (!(T > 0.0)) throw domain_error("equilibrium_residual: T must be positive");
  if (occ == Occupancy::planck) {
    const RateResult d = diffusion_constant(m, ThermalEnvironment{T, Statistics::full_n2_plus_n}, cfg);
    const RateResult mxi = drag_coefficient_nonrel(m, T, cfg).force_per_velocity;
    const double lhs = 0.5 * d.value;
    return (lhs - constants::k_B * T * mxi.value) / lhs;
  }
  // Wien occupation substituted into both integrals.
  const double omega_T = constants::thermal_omega(T);
  auto alpha_weight = [&](double x) {
    return std::pow(x, 5.0) * detail::alpha_I_for_diffusion(m, x * omega_T);
  };
  auto diff_int = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double nw = std::exp(-x);
    return alpha_weight(x) * (nw * nw + nw);
  };
  auto drag_int = [&](double x) {
    if (x <= 0.0) return 0.0;
    return alpha_weight(x) * std::exp(-x);  // -dn_w/dx = n_w
  };
  const auto breaks = detail::resonance_breakpoints(m, omega_T);
  const double di = integrate_semi_infinite(diff_int, 1.0, cfg, breaks).value;
  const double dr = integrate_semi_infinite(drag_int, 1.0, cfg, breaks).value;
  // Prefactors cancel in the ratio: residual = (di/2 - dr/2) / (di/2).
  return (di - dr) / di;
}

// Discretized velocity distribution on a uniform grid of cell centers.
struct VelocityDistribution {
  std::vector<double> v;  // cm/s, uniform ascending cell centers
  std::vector<double> f;  // density, >= 0
  double mass;            // g
  double T;               // K
  double xi;              // 1/s

  double dv() const { return v.size() > 1 ? v[1] - v[0] : 0.0; }
  double norm() const {
    double s = 0.0;
    for (double fi : f) s += fi;
    return s * dv();
  }
  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * f[i];
    return s * dv() / norm();
  }
  double variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - mu;
      s += d * d * f[i];
    }
    return s * dv() / norm();
  }
};

// Uniform cell-center grid spanning +-half_width thermal velocities.
inline std::vector<double> velocity_grid(double mass, double T, int cells = 1024,
                                         double half_width = 8.0) {
  if (cells < 8) throw domain_error("velocity_grid: too few cells");
  const double vth = std::sqrt(constants::k_B * T / mass);
  const double lo = -half_width * vth;
  const double dv = 2.0 * half_width * vth / cells;
  std::vector<double> v(cells);
  for (int i = 0; i < cells; ++i) v[i] = lo + (i + 0.5) * dv;
  return v;
}

inline VelocityDistribution gaussian_distribution(std::vector<double> grid, double mass,
                                                  double T, double xi, double v0,
                                                  double sigma) {
  VelocityDistribution d;
  d.v = std::move(grid);
  d.mass = mass;
  d.T = T;
  d.xi = xi;
  d.f.resize(d.v.size());
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * constants::pi));
  for (std::size_t i = 0; i < d.v.size(); ++i) {
    const double z = (d.v[i] - v0) / sigma;
    d.f[i] = norm * std::exp(-0.5 * z * z);
  }
  return d;
}

inline VelocityDistribution maxwell_boltzmann(std::vector<double> grid, double mass,
                                              double T, double xi) {
  const double vth = std::sqrt(constants::k_B * T / mass);
  return gaussian_distribution(std::move(grid), mass, T, xi, 0.0, vth);
}

namespace detail {

// Chang-Cooper weight delta(w) = 1/w - 1/(e^w - 1); the series below
// |w| = 1e-3 keeps full precision through the 0/0 point.
inline double chang_cooper_delta(double w) {
  if (std::abs(w) < 1e-3) {
    return 0.5 - w / 12.0 + w * w * w / 720.0;
  }
  return 1.0 / w - 1.0 / std::expm1(w);
}

// Tridiagonal solve (Thomas algorithm), in-place on the rhs vector.
inline void solve_tridiagonal(const std::vector<double>& lower,
                              const std::vector<double>& diag,
                              const std::vector<double>& upper,
                              std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i] * c[i - 1];
    c[i] = upper[i] / m;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
  }
  rhs[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = d[i] - c[i] * rhs[i + 1];
  }
}

} // namespace detail

// Conservative finite-volume evolution of the velocity Fokker-Planck
// equation df/dt = d/dv [ xi v f + (xi k_B T / m) df/dv ], Crank-Nicolson
// in time with Chang-Cooper flux weights. The discrete steady state is the
// Maxwell-Boltzmann density sampled at cell centers, and the total mass is
// conserved to machine precision (zero-flux boundaries, telescoping sum).
inline VelocityDistribution fokker_planck_evolve(const VelocityDistribution& f0,
                                                 double xi, double mass, double T,
                                                 double t_final, double dt) {
  if (!(xi > 0.0)) throw domain_error("fokker_planck_evolve: xi must be positive");
  if (!(mass > 0.0) || !(T > 0.0)) throw domain_error("fokker_planck_evolve: bad mass or T");
  if (!(dt > 0.0)) throw domain_error("fokker_planck_evolve: dt must be positive");
  if (!(t_final >= 0.0)) throw domain_error("fokker_planck_evolve: t_final must be nonnegative");
  const std::size_t n = f0.v.size();
  if (n < 8) throw domain_error("fokker_planck_evolve: grid too small");
  const double dv = f0.dv();
  for (std::size_t i = 2; i < n; ++i) {
    if (std::abs((f0.v[i] - f0.v[i - 1]) - dv) > 1e-9 * dv) {
      throw domain_error("fokker_planck_evolve: grid must be uniform");
    }
  }
  const double vth = std::sqrt(constants::k_B * T / mass);
  if (std::max(std::abs(f0.v.front()), std::abs(f0.v.back())) < 6.0 * vth) {
    throw domain_error("fokker_planck_evolve: grid must extend to at least 6 thermal velocities");
  }

  const double D = xi * constants::k_B * T / mass;  // velocity-space diffusion

  // Interior edge coefficients: G_e = P f_left + Q f_right.
  std::vector<double> P(n - 1), Q(n - 1);
  for (std::size_t e = 0; e < n - 1; ++e) {
    const double ve = 0.5 * (f0.v[e] + f0.v[e + 1]);
    const double a = xi * ve;
    const double w = a * dv / D;
    const double delta = detail::chang_cooper_delta(w);
    P[e] = a * delta - D / dv;
    Q[e] = a * (1.0 - delta) + D / dv;
  }

  // L f gives df/dt; build the Crank-Nicolson tridiagonals.
  // Row i: (-P[i-1] f_{i-1} + (P[i] - Q[i-1]) f_i + Q[i] f_{i+1}) / dv,
  // with the boundary fluxes dropped (zero-flux).
  auto build = [&](double coeff, std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper) {
    lower.assign(n, 0.0);
    diag.assign(n, 1.0);
    upper.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double cP = i < n - 1 ? P[i] : 0.0;      // outgoing right flux
      const double cQ = i > 0 ? Q[i - 1] : 0.0;      // incoming left flux
      diag[i] += coeff * (cP - cQ) / dv;
      if (i > 0) lower[i] = -coeff * P[i - 1] / dv;
      if (i < n - 1) upper[i] = coeff * Q[i] / dv;
    }
  };

  std::vector<double> lo_m, di_m, up_m;  // implicit side (I - dt/2 L)
  std::vector<double> lo_p, di_p, up_p;  // explicit side (I + dt/2 L)

  VelocityDistribution out = f0;
  out.mass = mass;
  out.T = T;
  out.xi = xi;

  double t = 0.0;
  std::vector<double> rhs(n);
  while (t < t_final) {
    const double h = std::min(dt, t_final - t);
    build(-0.5 * h, lo_m, di_m, up_m);
    build(+0.5 * h, lo_p, di_p, up_p);
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] = di_p[i] * out.f[i];
      if (i > 0) rhs[i] += lo_p[i] * out.f[i - 1];
      if (i < n - 1) rhs[i] += up_p[i] * out.f[i + 1];
    }
    detail::solve_tridiagonal(lo_m, di_m, up_m, rhs);

    double fmax = 0.0, fmin = 0.0;
    for (double fi : rhs) {
      fmax = std::max(fmax, fi);
      fmin = std::min(fmin, fi);
    }
    if (fmin < -1e-12 * fmax) {
      const double a_max = xi * std::max(std::abs(f0.v.front()), std::abs(f0.v.back()));
      const double dt_safe = 0.45 * dv * dv / (2.0 * D + a_max * dv);
      throw step_rejection_error("fokker_planck_evolve: positivity violated; reduce dt",
                                 dt_safe);
    }
    out.f = rhs;
    t += h;
  }
  return out;
}

// Analytic Ornstein-Uhlenbeck moments for the same process.
inline double ou_mean(double v0, double xi, double t) { return v0 * std::exp(-xi * t); }

inline double ou_variance(double sigma0_sq, double xi, double mass, double T, double t) {
  const double s_inf = constants::k_B * T / mass;
  const double decay = std::exp(-2.0 * xi * t);
  return s_inf + (sigma0_sq - s_inf) * decay;
}

} // namespace bbrad
