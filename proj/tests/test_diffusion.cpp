// Momentum diffusion constants: quadrature vs closed forms, statistics
// decomposition, temperature scaling, wavenumber-space variants, and the
// gas-collision reference.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

namespace {
const bbrad::PolarizabilityModel electron = bbrad::ElectronModel{};
const bbrad::PolarizabilityModel glass = bbrad::SphereModel{1e-6, {2.1, 0.0}};

double diffusion(const bbrad::PolarizabilityModel& m, double T, bbrad::Statistics s) {
  return bbrad::diffusion_constant(m, {T, s}, {}).value;
}
} // namespace

TEST_CASE("quadrature matches the closed forms across three decades") {
  for (const double T : {3.0, 300.0, 3000.0}) {
    for (const auto* m : {&electron, &glass}) {
      const bbrad::ThermalEnvironment env{T, bbrad::Statistics::full_n2_plus_n};
      const auto quad = bbrad::diffusion_constant(*m, env);
      const auto closed = bbrad::diffusion_closed_form(*m, env);
      REQUIRE(quad.value == Approx(closed.value).epsilon(1e-10));
      REQUIRE(quad.method == bbrad::Method::quadrature);
      REQUIRE(closed.method == bbrad::Method::closed_form);
      REQUIRE(std::string(quad.unit.gaussian) == "g^2 cm^2 s^-3");
    }
  }
}

TEST_CASE("wave and particle contributions add up to the full constant") {
  for (const auto* m : {&electron, &glass}) {
    const double p = diffusion(*m, 300.0, bbrad::Statistics::particle_n);
    const double w = diffusion(*m, 300.0, bbrad::Statistics::wave_n2);
    const double f = diffusion(*m, 300.0, bbrad::Statistics::full_n2_plus_n);
    REQUIRE(p + w == Approx(f).epsilon(1e-12));
    REQUIRE(p > 0.0);
    REQUIRE(w > 0.0);
  }
}

TEST_CASE("particle share of the full constant is a pure zeta ratio") {
  // x^4 weight for the electron, x^8 weight for the sphere
  const double re = diffusion(electron, 300.0, bbrad::Statistics::particle_n) /
                    diffusion(electron, 300.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(re == Approx(bbrad::riemann_zeta(5.0) / bbrad::riemann_zeta(4.0)).epsilon(1e-10));

  const double rs = diffusion(glass, 300.0, bbrad::Statistics::particle_n) /
                    diffusion(glass, 300.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(rs == Approx(bbrad::riemann_zeta(9.0) / bbrad::riemann_zeta(8.0)).epsilon(1e-10));
  REQUIRE(rs > 0.9978);
  REQUIRE(rs < 0.9982);

  // the ratios are temperature independent
  const double re_hot = diffusion(electron, 3000.0, bbrad::Statistics::particle_n) /
                        diffusion(electron, 3000.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(re == Approx(re_hot).epsilon(1e-9));
}

TEST_CASE("temperature scaling: T^5 for the electron, T^9 for the sphere") {
  const double e_ratio = diffusion(electron, 600.0, bbrad::Statistics::full_n2_plus_n) /
                         diffusion(electron, 300.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(e_ratio == Approx(32.0).epsilon(1e-10));
  const double s_ratio = diffusion(glass, 600.0, bbrad::Statistics::full_n2_plus_n) /
                         diffusion(glass, 300.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(s_ratio == Approx(512.0).epsilon(1e-10));
}

TEST_CASE("wavenumber-space constant is the momentum one over hbar^2") {
  const bbrad::ThermalEnvironment env{300.0, bbrad::Statistics::particle_n};
  const auto k = bbrad::k_space_diffusion(glass, env);
  const auto d = bbrad::diffusion_constant(glass, env);
  const double h2 = bbrad::constants::hbar * bbrad::constants::hbar;
  REQUIRE(k.value == Approx(d.value / h2).epsilon(1e-12));
  REQUIRE(std::string(k.unit.gaussian) == "cm^-2 s^-1");
}

TEST_CASE("scattering constant is half the particle wavenumber constant") {
  const auto s = std::get<bbrad::SphereModel>(glass);
  for (const double T : {100.0, 300.0, 1000.0}) {
    const auto lam = bbrad::scattering_constant_lambda(s, T);
    const auto k = bbrad::k_space_diffusion(glass, {T, bbrad::Statistics::particle_n});
    REQUIRE(lam.value == Approx(0.5 * k.value).epsilon(1e-10));
  }
}

TEST_CASE("closed form is unavailable for the structured two-level response") {
  const bbrad::PolarizabilityModel atom = bbrad::TwoLevelModel{2e15, 1e-18, 1e8, 1.0, 0.0};
  REQUIRE_THROWS_AS(
      bbrad::diffusion_closed_form(atom, {300.0, bbrad::Statistics::full_n2_plus_n}),
      bbrad::unsupported_model_error);
}

TEST_CASE("environment validation") {
  REQUIRE_THROWS_AS(
      bbrad::diffusion_constant(electron, {0.0, bbrad::Statistics::full_n2_plus_n}),
      bbrad::domain_error);
  REQUIRE_THROWS_AS(
      bbrad::diffusion_constant(electron, {-10.0, bbrad::Statistics::full_n2_plus_n}),
      bbrad::domain_error);
}

TEST_CASE("gas-collision diffusion matches its closed form and T^{3/2} scaling") {
  bbrad::AirEnvironment env;
  env.T = 300.0;
  env.molecule_mass = 28.97 * bbrad::constants::amu;
  env.number_density = 2.446e19;
  env.radius = 1e-5;
  const auto quad = bbrad::air_diffusion(env);
  const auto closed = bbrad::air_diffusion_closed_form(env);
  REQUIRE(quad.value == Approx(closed.value).epsilon(1e-10));

  bbrad::AirEnvironment hot = env;
  hot.T = 1200.0;
  REQUIRE(bbrad::air_diffusion_closed_form(hot).value / closed.value ==
          Approx(8.0).epsilon(1e-12));

  bbrad::AirEnvironment bad = env;
  bad.number_density = -1.0;
  REQUIRE_THROWS_AS(bbrad::air_diffusion(bad), bbrad::domain_error);
}
