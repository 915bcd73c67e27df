// Spectrum ODE triad, thermal balance residuals, and the velocity-space
// Fokker-Planck relaxation machinery.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

namespace {
const bbrad::PolarizabilityModel electron = bbrad::ElectronModel{};
const bbrad::PolarizabilityModel glass = bbrad::SphereModel{1e-6, {2.1, 0.0}};

std::vector<double> log_grid(double a, double b, int n, double scale) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = scale * a * std::pow(b / a, double(i) / (n - 1));
  return g;
}
} // namespace

TEST_CASE("spectrum ODE solutions track the analytic branches") {
  const double T = 300.0;
  const double wT = bbrad::constants::thermal_omega(T);
  const auto grid = log_grid(0.1, 20.0, 60, wT);
  const double x0 = 1.0;

  const struct {
    bbrad::SpectrumBranch branch;
    double n0;
  } cases[] = {
      {bbrad::SpectrumBranch::wien, std::exp(-1.0)},
      {bbrad::SpectrumBranch::rayleigh_jeans, 1.0},
      {bbrad::SpectrumBranch::planck, 1.0 / std::expm1(1.0)},
  };
  for (const auto& cs : cases) {
    const auto sol = bbrad::spectrum_ode_solve(cs.branch, T, x0 * wT, cs.n0, grid, 1e-10);
    REQUIRE(sol.n_values.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i] / wT;
      const double exact = bbrad::spectrum_analytic(cs.branch, x0, cs.n0, x);
      REQUIRE(sol.n_values[i] == Approx(exact).epsilon(1e-6).margin(1e-12));
    }
  }
}

TEST_CASE("canonical anchors give unit integration constants") {
  const double T = 300.0;
  const double wT = bbrad::constants::thermal_omega(T);
  const std::vector<double> grid{0.5 * wT, wT, 2.0 * wT};
  const auto planck = bbrad::spectrum_ode_solve(bbrad::SpectrumBranch::planck, T, wT,
                                                1.0 / std::expm1(1.0), grid, 1e-10);
  REQUIRE(planck.integration_constant == Approx(1.0).epsilon(1e-9));
  const auto wien = bbrad::spectrum_ode_solve(bbrad::SpectrumBranch::wien, T, wT,
                                              std::exp(-1.0), grid, 1e-10);
  REQUIRE(wien.integration_constant == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("analytic branch guards against pole crossings") {
  // Rayleigh-Jeans n = 1/(x - c) anchored at x0=1, n0=2 has its pole at x=1/2
  REQUIRE_THROWS_AS(
      bbrad::spectrum_analytic(bbrad::SpectrumBranch::rayleigh_jeans, 1.0, 2.0, 0.1),
      bbrad::domain_error);
  REQUIRE(bbrad::spectrum_analytic(bbrad::SpectrumBranch::rayleigh_jeans, 1.0, 2.0, 2.0) ==
          Approx(1.0 / 1.5).epsilon(1e-14));
}

TEST_CASE("thermal balance closes for the Planck occupation only") {
  for (const auto* m : {&electron, &glass}) {
    REQUIRE(std::abs(bbrad::equilibrium_residual(*m, 300.0)) < 1e-6);
  }
  // Wien residuals are pure rational numbers for power-law responses:
  // weight x^4 gives 1/33, weight x^8 gives 1/513
  const double rw_e =
      bbrad::equilibrium_residual(electron, 300.0, {}, bbrad::Occupancy::wien);
  REQUIRE(rw_e == Approx(1.0 / 33.0).epsilon(1e-6));
  const double rw_s =
      bbrad::equilibrium_residual(glass, 300.0, {}, bbrad::Occupancy::wien);
  REQUIRE(rw_s == Approx(1.0 / 513.0).epsilon(1e-6));
}

TEST_CASE("discrete Maxwell-Boltzmann is a fixed point of the evolution") {
  const double mass = 1e-17, T = 300.0, xi = 1.0;
  const auto grid = bbrad::velocity_grid(mass, T, 256, 8.0);
  const auto mb = bbrad::maxwell_boltzmann(grid, mass, T, xi);
  const auto out = bbrad::fokker_planck_evolve(mb, xi, mass, T, 1.0, 5e-4);
  double l1 = 0.0;
  for (std::size_t i = 0; i < mb.f.size(); ++i) {
    l1 += std::abs(out.f[i] - mb.f[i]) * mb.dv();
  }
  REQUIRE(l1 < 1e-10);
}

TEST_CASE("relaxation moments follow the analytic mean and variance") {
  const double mass = 1e-17, T = 300.0, xi = 1.0;
  const double vth = std::sqrt(bbrad::constants::k_B * T / mass);
  const auto grid = bbrad::velocity_grid(mass, T, 512, 8.0);
  const auto f0 =
      bbrad::gaussian_distribution(grid, mass, T, xi, 2.0 * vth, 0.7 * vth);
  const double t = 1.0;
  const auto f = bbrad::fokker_planck_evolve(f0, xi, mass, T, t, 1e-3);

  // tolerance covers the O(dt) + O(dv^2) discretization error at this grid
  REQUIRE(f.mean() == Approx(bbrad::ou_mean(2.0 * vth, xi, t)).epsilon(5e-4));
  REQUIRE(f.variance() ==
          Approx(bbrad::ou_variance(0.49 * vth * vth, xi, mass, T, t)).epsilon(5e-4));

  // conservation and positivity
  REQUIRE(f.norm() == Approx(f0.norm()).epsilon(1e-12));
  for (const double fi : f.f) REQUIRE(fi >= 0.0);
}

TEST_CASE("long-time distribution converges to Maxwell-Boltzmann in L1") {
  const double mass = 1e-17, T = 300.0, xi = 1.0;
  const double vth = std::sqrt(bbrad::constants::k_B * T / mass);
  const auto grid = bbrad::velocity_grid(mass, T, 512, 8.0);
  const auto f0 =
      bbrad::gaussian_distribution(grid, mass, T, xi, 2.0 * vth, 0.7 * vth);
  const auto f = bbrad::fokker_planck_evolve(f0, xi, mass, T, 10.0, 1e-3);
  const auto mb = bbrad::maxwell_boltzmann(grid, mass, T, xi);
  double l1 = 0.0;
  for (std::size_t i = 0; i < f.f.size(); ++i) {
    l1 += std::abs(f.f[i] / f.norm() - mb.f[i] / mb.norm()) * f.dv();
  }
  REQUIRE(l1 < 1e-3);
}

TEST_CASE("oversized steps on spiky data are rejected, not smeared") {
  const double mass = 1e-17, T = 300.0, xi = 1.0;
  const double vth = std::sqrt(bbrad::constants::k_B * T / mass);
  const auto grid = bbrad::velocity_grid(mass, T, 256, 8.0);
  const auto spike =
      bbrad::gaussian_distribution(grid, mass, T, xi, 2.0 * vth, 0.02 * vth);
  REQUIRE_THROWS_AS(bbrad::fokker_planck_evolve(spike, xi, mass, T, 1.0, 0.1),
                    bbrad::step_rejection_error);
}

TEST_CASE("grid preconditions") {
  const double mass = 1e-17, T = 300.0, xi = 1.0;
  // non-uniform grid
  auto grid = bbrad::velocity_grid(mass, T, 256, 8.0);
  grid[100] += 0.3 * (grid[1] - grid[0]);
  const auto warped = bbrad::gaussian_distribution(grid, mass, T, xi, 0.0, 1.0);
  REQUIRE_THROWS_AS(bbrad::fokker_planck_evolve(warped, xi, mass, T, 0.1, 1e-3),
                    bbrad::domain_error);
  // grid not wide enough for the equilibrium tails
  const auto narrow = bbrad::maxwell_boltzmann(bbrad::velocity_grid(mass, T, 256, 4.0),
                                               mass, T, xi);
  REQUIRE_THROWS_AS(bbrad::fokker_planck_evolve(narrow, xi, mass, T, 0.1, 1e-3),
                    bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::velocity_grid(mass, T, 4, 8.0), bbrad::domain_error);
}

TEST_CASE("ou moment formulas bracket their limits") {
  const double mass = 1e-17, T = 300.0, xi = 2.0;
  const double kT_over_m = bbrad::constants::k_B * T / mass;
  REQUIRE(bbrad::ou_mean(100.0, xi, 0.0) == 100.0);
  REQUIRE(bbrad::ou_mean(100.0, xi, 10.0) == Approx(100.0 * std::exp(-20.0)).epsilon(1e-12));
  REQUIRE(bbrad::ou_variance(0.0, xi, mass, T, 1e9) == Approx(kT_over_m).epsilon(1e-12));
  REQUIRE(bbrad::ou_variance(5.0 * kT_over_m, xi, mass, T, 0.0) ==
          Approx(5.0 * kT_over_m).epsilon(1e-12));
}
