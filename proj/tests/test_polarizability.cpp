// Dynamic polarizability models, the effective imaginary part, and the
// Rayleigh cross sections.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

namespace {
const bbrad::ElectronModel electron{};
const bbrad::SphereModel glass{1e-6, {2.1, 0.0}};
const bbrad::SphereModel lossy{1e-6, {2.1, 0.3}};
} // namespace

TEST_CASE("electron response: low-frequency limit and radiative imaginary part") {
  const double w = 1e10;
  const auto a = bbrad::alpha(electron, w);
  const double e2_over_m = electron.charge * electron.charge / electron.mass;
  REQUIRE(a.real() == Approx(-e2_over_m / (w * w)).epsilon(1e-12));

  // Im alpha equals (2/3)(w/c)^3 |alpha|^2 identically, not just asymptotically
  const double k = w / bbrad::constants::c;
  REQUIRE(a.imag() == Approx(2.0 / 3.0 * k * k * k * std::norm(a)).epsilon(1e-13));
  REQUIRE(a.imag() > 0.0);

  const auto eff = bbrad::alpha_I_effective(bbrad::PolarizabilityModel{electron}, w);
  REQUIRE(eff.value == Approx(a.imag()).epsilon(1e-14));
  REQUIRE_FALSE(eff.from_radiative_reaction);
  REQUIRE_FALSE(eff.negative);
}

TEST_CASE("lossless sphere: static polarizability and substituted scattering part") {
  const double w = 1e12;
  const auto a = bbrad::alpha(glass, w);
  const double a3 = glass.radius * glass.radius * glass.radius;
  REQUIRE(a.real() == Approx(a3 * 1.1 / 4.1).epsilon(1e-14));
  REQUIRE(a.imag() == 0.0);

  const auto eff = bbrad::alpha_I_effective(bbrad::PolarizabilityModel{glass}, w);
  const double k = w / bbrad::constants::c;
  REQUIRE(eff.from_radiative_reaction);
  REQUIRE(eff.value == Approx(2.0 / 3.0 * k * k * k * std::norm(a)).epsilon(1e-14));
  REQUIRE(bbrad::optical_theorem_exact(bbrad::PolarizabilityModel{glass}));
}

TEST_CASE("lossy sphere keeps its direct absorption channel") {
  const auto eff = bbrad::alpha_I_effective(bbrad::PolarizabilityModel{lossy}, 1e12);
  REQUIRE(eff.value > 0.0);
  REQUIRE_FALSE(eff.from_radiative_reaction);
  REQUIRE_FALSE(bbrad::optical_theorem_exact(bbrad::PolarizabilityModel{lossy}));
}

TEST_CASE("two-level response: Lorentzian absorber and inverted-population gain") {
  const bbrad::TwoLevelModel atom{2e15, 1e-18, 1e8, 1.0, 0.0};
  const double peak = bbrad::alpha(atom, atom.omega0).imag();
  REQUIRE(peak > 0.0);
  REQUIRE(peak > bbrad::alpha(atom, atom.omega0 + 10.0 * atom.beta).imag() * 10.0);
  REQUIRE(peak > bbrad::alpha(atom, atom.omega0 - 10.0 * atom.beta).imag() * 10.0);

  // far below resonance the response is real-dominated and positive
  const auto low = bbrad::alpha(atom, atom.omega0 * 1e-8);
  REQUIRE(low.real() ==
          Approx(atom.mu * atom.mu / (3.0 * bbrad::constants::hbar * atom.omega0))
              .epsilon(1e-6));

  const bbrad::TwoLevelModel inverted{2e15, 1e-18, 1e8, 0.0, 1.0};
  const auto eff =
      bbrad::alpha_I_effective(bbrad::PolarizabilityModel{inverted}, inverted.omega0);
  REQUIRE(eff.negative);
  REQUIRE(eff.value < 0.0);
}

TEST_CASE("Thomson limit of the electron scattering cross section") {
  const double re = electron.charge * electron.charge /
                    (electron.mass * bbrad::constants::c * bbrad::constants::c);
  const double sigma_T = 8.0 * bbrad::constants::pi / 3.0 * re * re;
  const auto s = bbrad::rayleigh_cross_section(bbrad::PolarizabilityModel{electron}, 1e10);
  REQUIRE(s.value == Approx(sigma_T).epsilon(1e-12));
  REQUIRE(std::string(s.unit.gaussian) == "cm^2");
}

TEST_CASE("sphere cross section scales as the fourth power of frequency") {
  const bbrad::PolarizabilityModel m{glass};
  const double s1 = bbrad::rayleigh_cross_section(m, 1e12).value;
  const double s2 = bbrad::rayleigh_cross_section(m, 2e12).value;
  REQUIRE(s2 / s1 == Approx(16.0).epsilon(1e-12));
}

TEST_CASE("differential cross section integrates to the total") {
  const bbrad::PolarizabilityModel m{glass};
  const double w = 5e13;
  const auto rule = bbrad::gauss_legendre(16);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    total += rule.w[i] * bbrad::differential_cross_section(m, w, rule.x[i]);
  }
  total *= 2.0 * bbrad::constants::pi;
  REQUIRE(total ==
          Approx(bbrad::rayleigh_cross_section(m, w).value).epsilon(1e-12));
}

TEST_CASE("model validation rejects unphysical parameters") {
  REQUIRE_THROWS_AS(bbrad::alpha(electron, 0.0), bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::alpha(bbrad::SphereModel{-1.0, {2.1, 0.0}}, 1e12),
                    bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::alpha(bbrad::SphereModel{1e-6, {-2.0, 0.0}}, 1e12),
                    bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::alpha(bbrad::TwoLevelModel{2e15, 1e-18, 1e8, 0.7, 0.6}, 1e12),
                    bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::alpha(bbrad::TwoLevelModel{2e15, 1e-18, 0.0, 1.0, 0.0}, 1e12),
                    bbrad::domain_error);
}
