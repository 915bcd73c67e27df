#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/diffusion.hpp"
#include "bbrad/errors.hpp"
#include "bbrad/polarizability.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"
#include "bbrad/rng.hpp"
#include "bbrad/special.hpp"

namespace bbrad {

// Poisson momentum-kick process: photons arrive per frequency bin at the
// scattering rate and each scattering transfers (hbar omega / c) times the
// direction-difference projection. Arrivals are independent (Poisson) by
// construction, which reproduces the particle-statistics diffusion
// constant; thermal bunching (the n^2 piece) is deliberately absent, so
// results are always compared against particle_n, never the full weight.
struct KickProcessSpec {
  PolarizabilityModel model;
  double T = 0.0;            // K
  double beta = 0.0;         // momentum damping rate, 1/s
  int frequency_bins = 512;
  double duration = 0.0;     // s; must be >= 20/beta
  std::uint64_t seed = 0;
  int paths = 64;            // independent trajectories
  double x_max = 30.0;       // band edge in x = hbar omega / k_B T
};

struct KickSimulationResult {
  RateResult msq_momentum;        // time-averaged steady-state <p^2>
  RateResult diffusion_estimate;  // 2 beta <p^2>, err_estimate = 1 standard error
  double total_kicks;
  double burn_in;                 // s discarded before averaging
  double relative_se;
  bool precision_warning;         // true when relative_se > 0.1
  std::vector<double> path_msq;   // per-path time averages
};

inline KickSimulationResult simulate_kicks(const KickProcessSpec& spec) {
  if (!(spec.T > 0.0)) throw domain_error("simulate_kicks: T must be positive");
  if (!(spec.beta > 0.0)) throw domain_error("simulate_kicks: beta must be positive");
  if (spec.frequency_bins < 1) throw domain_error("simulate_kicks: need at least one bin");
  if (spec.paths < 2) throw domain_error("simulate_kicks: need at least two paths");
  if (!(spec.duration >= 20.0 / spec.beta)) {
    throw domain_error("simulate_kicks: duration must cover at least 20/beta "
                       "for a steady-state estimate");
  }

  const double omega_T = constants::thermal_omega(spec.T);
  const int nb = spec.frequency_bins;
  const double dx = spec.x_max / nb;

  // Photon scattering rate density u(omega) = 4 omega^3 n alpha_I / (pi c^3);
  // per-bin arrival rates by one Kronrod panel over each bin (the integrand
  // is smooth at this resolution). Kicks within a bin use the center
  // frequency; the residual binning bias is far below the Monte Carlo
  // standard error at practical sample counts.
  auto rate_density = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double omega = x * omega_T;
    const double aI = alpha_I_effective(spec.model, omega).value;
    if (aI <= 0.0) return 0.0;
    const double c3 = constants::c * constants::c * constants::c;
    return 4.0 * std::pow(omega, 3.0) * bose_occupation(x) * aI /
           (constants::pi * c3) * omega_T;  // rate per unit x
  };
  std::vector<double> bin_rate(nb), bin_kick(nb);
  QuadratureConfig bin_cfg;
  bin_cfg.rel_tol = 1e-12;
  bin_cfg.max_subdivisions = 64;
  for (int b = 0; b < nb; ++b) {
    const double lo = b * dx, hi = (b + 1) * dx;
    bin_rate[b] = integrate(rate_density, lo, hi, bin_cfg).value;
    const double omega_c = (lo + 0.5 * dx) * omega_T;
    bin_kick[b] = constants::hbar * omega_c / constants::c;
  }

  const double burn = 10.0 / spec.beta;
  const double t_meas = spec.duration - burn;

  std::vector<double> path_means(spec.paths);
  double total_kicks = 0.0;

  for (int path = 0; path < spec.paths; ++path) {
    CounterRng rng(spec.seed, static_cast<std::uint64_t>(path));

    using Event = std::pair<double, int>;  // (arrival time, bin)
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> heap;
    for (int b = 0; b < nb; ++b) {
      if (bin_rate[b] > 0.0) heap.push({rng.exponential(bin_rate[b]), b});
    }

    double p = 0.0, t_prev = 0.0, acc = 0.0;
    auto accumulate = [&](double t_to) {
      // Exact integral of p^2 over [t_prev, t_to] under pure decay,
      // restricted to the measurement window.
      const double lo = std::max(t_prev, burn);
      if (t_to > lo && p != 0.0) {
        const double p_lo = p * std::exp(-spec.beta * (lo - t_prev));
        const double span = t_to - lo;
        acc += p_lo * p_lo * -std::expm1(-2.0 * spec.beta * span) / (2.0 * spec.beta);
      }
    };

    while (!heap.empty()) {
      const auto [t_ev, b] = heap.top();
      heap.pop();
      if (t_ev >= spec.duration) break;
      accumulate(t_ev);
      p *= std::exp(-spec.beta * (t_ev - t_prev));
      // Incoming and outgoing direction x-projections are each uniform on
      // [-1, 1] for isotropic directions.
      p += bin_kick[b] * (rng.uniform_sym() - rng.uniform_sym());
      t_prev = t_ev;
      total_kicks += 1.0;
      heap.push({t_ev + rng.exponential(bin_rate[b]), b});
    }
    accumulate(spec.duration);
    path_means[path] = acc / t_meas;
  }

  double mean = 0.0;
  for (double m : path_means) mean += m;
  mean /= spec.paths;
  double var = 0.0;
  for (double m : path_means) var += (m - mean) * (m - mean);
  var /= (spec.paths - 1);
  const double se = std::sqrt(var / spec.paths);
  const double rel_se = mean > 0.0 ? se / mean : 1.0;

  KickSimulationResult out;
  out.msq_momentum = {mean, units::momentum_squared, se, Method::monte_carlo};
  out.diffusion_estimate = {2.0 * spec.beta * mean, units::momentum_diffusion,
                            2.0 * spec.beta * se, Method::monte_carlo};
  out.total_kicks = total_kicks;
  out.burn_in = burn;
  out.relative_se = rel_se;
  out.precision_warning = rel_se > 0.1;
  out.path_msq = std::move(path_means);
  return out;
}

enum class RecoilSampling { paper_uniform, phase_function };

struct RecoilMoment {
  double value;           // <[(khat - khat') . xhat]^2>, units of (hbar omega / c)^2
  double standard_error;
  long long samples;
};

// Second moment of the momentum-transfer projection. paper_uniform draws
// both directions independently and isotropically (the convention behind
// the 2/3 factor); phase_function weights the scattering angle by the
// Rayleigh 1 + cos^2(theta) distribution. Both give 2/3: the phase
// function is even in cos(theta), so the mean scattering cosine vanishes
// either way.
inline RecoilMoment recoil_second_moment(RecoilSampling sampling, long long samples,
                                         std::uint64_t seed) {
  if (samples < 100000) {
    throw domain_error("recoil_second_moment: needs at least 1e5 samples");
  }
  CounterRng rng(seed, 0x7265636fULL);
  double sum = 0.0, sum2 = 0.0;
  if (sampling == RecoilSampling::paper_uniform) {
    for (long long i = 0; i < samples; ++i) {
      const double d = rng.uniform_sym() - rng.uniform_sym();
      const double d2 = d * d;
      sum += d2;
      sum2 += d2 * d2;
    }
  } else {
    for (long long i = 0; i < samples; ++i) {
      // Incoming direction isotropic.
      const double cz = rng.uniform_sym();
      const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      const double ph = 2.0 * constants::pi * rng.uniform();
      const std::array<double, 3> k{sz * std::cos(ph), sz * std::sin(ph), cz};
      // Scattering angle from the normalized 1 + cos^2 distribution via the
      // closed-form inverse CDF: c^3 + 3c = 8F - 4 solved by Cardano.
      const double q = 8.0 * rng.uniform() - 4.0;
      const double s = std::sqrt(q * q / 4.0 + 1.0);
      const double ct = std::cbrt(q / 2.0 + s) + std::cbrt(q / 2.0 - s);
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double ph2 = 2.0 * constants::pi * rng.uniform();
      // Orthonormal frame around k.
      std::array<double, 3> e1 = std::abs(k[2]) < 0.9
                                     ? std::array<double, 3>{-k[1], k[0], 0.0}
                                     : std::array<double, 3>{1.0, 0.0, 0.0};
      {
        const double dot = e1[0] * k[0] + e1[1] * k[1] + e1[2] * k[2];
        for (int a = 0; a < 3; ++a) e1[a] -= dot * k[a];
        const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
        for (int a = 0; a < 3; ++a) e1[a] /= n1;
      }
      const std::array<double, 3> e2{k[1] * e1[2] - k[2] * e1[1],
                                     k[2] * e1[0] - k[0] * e1[2],
                                     k[0] * e1[1] - k[1] * e1[0]};
      const double kx_out = ct * k[0] + st * (std::cos(ph2) * e1[0] + std::sin(ph2) * e2[0]);
      const double d = k[0] - kx_out;
      const double d2 = d * d;
      sum += d2;
      sum2 += d2 * d2;
    }
  }
  const double mean = sum / samples;
  const double var = sum2 / samples - mean * mean;
  return {mean, std::sqrt(var / samples), samples};
}

struct OUEnsembleMoments {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> mean_se;
  std::vector<double> variance_se;
  int paths;
};

// Euler-Maruyama ensemble for dv = -xi v dt + sqrt(2 xi k_B T / m) dW.
// Moments are recorded at the step closest to each checkpoint (and at
// t_final). dt is capped at 0.01/xi to keep the weak error below the
// statistical resolution of practical ensembles.
inline OUEnsembleMoments ou_trajectories(double xi, double mass, double T, int n_paths,
                                         double t_final, double dt, std::uint64_t seed,
                                         double v0 = 0.0,
                                         std::vector<double> checkpoints = {}) {
  if (!(xi > 0.0)) throw domain_error("ou_trajectories: xi must be positive");
  if (!(mass > 0.0) || !(T >= 0.0)) throw domain_error("ou_trajectories: bad mass or T");
  if (n_paths < 2) throw domain_error("ou_trajectories: need at least two paths");
  if (!(dt > 0.0) || dt > 0.01 / xi) {
    throw domain_error("ou_trajectories: dt must satisfy dt <= 0.01/xi");
  }
  checkpoints.push_back(t_final);
  std::vector<long long> steps;
  for (double tc : checkpoints) {
    if (tc < 0.0 || tc > t_final * (1.0 + 1e-12)) {
      throw domain_error("ou_trajectories: checkpoint outside [0, t_final]");
    }
    steps.push_back(std::llround(tc / dt));
  }
  const long long n_steps = std::llround(t_final / dt);
  const double sigma_step = std::sqrt(2.0 * xi * constants::k_B * T / mass * dt);

  std::vector<double> sum(steps.size(), 0.0), sum2(steps.size(), 0.0);
  for (int path = 0; path < n_paths; ++path) {
    CounterRng rng(seed, 0x6f750000ULL + static_cast<std::uint64_t>(path));
    double v = v0;
    std::size_t ci = 0;
    for (long long k = 0; k <= n_steps; ++k) {
      for (std::size_t j = 0; j < steps.size(); ++j) {
        if (steps[j] == k) {
          sum[j] += v;
          sum2[j] += v * v;
        }
      }
      (void)ci;
      if (k < n_steps) v += -xi * v * dt + sigma_step * rng.normal();
    }
  }

  OUEnsembleMoments out;
  out.paths = n_paths;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const double m = sum[j] / n_paths;
    const double var = (sum2[j] - n_paths * m * m) / (n_paths - 1);
    out.times.push_back(steps[j] * dt);
    out.mean.push_back(m);
    out.variance.push_back(var);
    out.mean_se.push_back(std::sqrt(std::max(var, 0.0) / n_paths));
    out.variance_se.push_back(var * std::sqrt(2.0 / (n_paths - 1)));
  }
  return out;
}

// Isotropic Gaussian field sampler for the statistical-independence check
// of the field and its transverse gradient at one point.
struct FieldSampleSpec {
  int mode_count = 128;
  int sample_count = 10000;
  std::uint64_t seed = 1;
};

struct IndependenceReport {
  double correlation;         // corr(E_z, dE_z/dx)
  double correlation_bound;   // 3/sqrt(N)
  double max_cf_deviation;    // max |C_XY - C_X C_Y| over the test grid
  double cf_bound;            // 5/sqrt(N)
  bool correlation_pass;
  bool factorization_pass;
  bool pass;
  int sample_count;
  int mode_count;
};

// Synthesizes E_z and dE_z/dx from a fixed set of isotropic directions
// (Fibonacci sphere) with fresh uniform phases per sample, then tests
// (i) the sample correlation against 3/sqrt(N) and (ii) factorization of
// the empirical joint characteristic function on a fixed grid against
// 5/sqrt(N). With negative_control the gradient channel is replaced by the
// field itself; the factorization check must then fail.
inline IndependenceReport gaussian_independence_test(const FieldSampleSpec& spec,
                                                     bool negative_control = false) {
  if (spec.mode_count < 100) {
    throw domain_error("gaussian_independence_test: mode_count must be >= 100 for isotropy");
  }
  if (spec.sample_count < 10000) {
    throw domain_error("gaussian_independence_test: sample_count must be >= 1e4");
  }
  const int M = spec.mode_count;
  const int N = spec.sample_count;

  // Fixed unit wavenumber; only the angular structure matters here.
  std::vector<std::array<double, 3>> khat(M);
  std::vector<double> eps_z(M), kx(M);
  const double ga = constants::pi * (3.0 - std::sqrt(5.0));  // golden angle
  for (int m = 0; m < M; ++m) {
    const double z = 1.0 - 2.0 * (m + 0.5) / M;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * m;
    khat[m] = {r * std::cos(phi), r * std::sin(phi), z};
    // Transverse polarization with the largest z-component: the unit vector
    // along zhat - (zhat.khat) khat.
    const double kz = khat[m][2];
    const double nz = std::sqrt(std::max(1e-30, 1.0 - kz * kz));
    eps_z[m] = nz;  // z-component of the chosen polarization
    kx[m] = khat[m][0];
  }

  const double amp = std::sqrt(2.0 / M);  // unit-variance-ish normalization
  std::vector<double> X(N), Y(N);
  for (int s = 0; s < N; ++s) {
    CounterRng rng(spec.seed, 0x66690000ULL + static_cast<std::uint64_t>(s));
    double x = 0.0, y = 0.0;
    for (int m = 0; m < M; ++m) {
      const double phase = 2.0 * constants::pi * rng.uniform();
      x += amp * eps_z[m] * std::cos(phase);
      y += -amp * eps_z[m] * kx[m] * std::sin(phase);
    }
    X[s] = x;
    Y[s] = negative_control ? x : y;
  }

  // Standardize both channels.
  auto standardize = [N](std::vector<double>& a) {
    double mu = 0.0;
    for (double v : a) mu += v;
    mu /= N;
    double var = 0.0;
    for (double v : a) var += (v - mu) * (v - mu);
    var /= (N - 1);
    const double sd = std::sqrt(var);
    for (double& v : a) v = (v - mu) / sd;
  };
  standardize(X);
  standardize(Y);

  double cxy = 0.0;
  for (int s = 0; s < N; ++s) cxy += X[s] * Y[s];
  cxy /= (N - 1);

  const std::array<double, 4> grid{-1.0, -0.5, 0.5, 1.0};
  double max_dev = 0.0;
  for (double gx : grid) {
    for (double gy : grid) {
      std::complex<double> c_xy{0.0, 0.0}, c_x{0.0, 0.0}, c_y{0.0, 0.0};
      for (int s = 0; s < N; ++s) {
        c_xy += std::exp(std::complex<double>(0.0, gx * X[s] + gy * Y[s]));
        c_x += std::exp(std::complex<double>(0.0, gx * X[s]));
        c_y += std::exp(std::complex<double>(0.0, gy * Y[s]));
      }
      c_xy /= static_cast<double>(N);
      c_x /= static_cast<double>(N);
      c_y /= static_cast<double>(N);
      max_dev = std::max(max_dev, std::abs(c_xy - c_x * c_y));
    }
  }

  IndependenceReport rep;
  rep.correlation = cxy;
  rep.correlation_bound = 3.0 / std::sqrt(static_cast<double>(N));
  rep.max_cf_deviation = max_dev;
  rep.cf_bound = 5.0 / std::sqrt(static_cast<double>(N));
  rep.correlation_pass = std::abs(cxy) <= rep.correlation_bound;
  rep.factorization_pass = max_dev <= rep.cf_bound;
  rep.pass = rep.correlation_pass && rep.factorization_pass;
  rep.sample_count = N;
  rep.mode_count = M;
  return rep;
}

} // namespace bbrad
