// Velocity-linear drag, its closed forms, the narrow-line two-level limit,
// the relativistic total force and its composed form, and vacuum friction.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

namespace {
const bbrad::PolarizabilityModel electron = bbrad::ElectronModel{};
const bbrad::PolarizabilityModel glass = bbrad::SphereModel{1e-6, {2.1, 0.0}};
const double c = bbrad::constants::c;
} // namespace

TEST_CASE("drag coefficient quadrature matches the closed forms") {
  for (const double T : {3.0, 300.0, 3000.0}) {
    for (const auto* m : {&electron, &glass}) {
      const auto quad = bbrad::drag_coefficient_nonrel(*m, T);
      const auto closed = bbrad::drag_closed_form(*m, T);
      REQUIRE(quad.force_per_velocity.value == Approx(closed.value).epsilon(1e-10));
      REQUIRE(std::string(quad.force_per_velocity.unit.gaussian) == "g s^-1");
      REQUIRE_FALSE(quad.xi.has_value());
    }
  }
}

TEST_CASE("xi accompanies the coefficient when a mass is supplied") {
  const double mass = 1e-14;
  const auto d = bbrad::drag_coefficient_nonrel(glass, 300.0, {}, mass);
  REQUIRE(d.xi.has_value());
  REQUIRE(d.xi->value == Approx(d.force_per_velocity.value / mass).epsilon(1e-14));
  REQUIRE(std::string(d.xi->unit.gaussian) == "s^-1");
  REQUIRE_THROWS_AS(bbrad::drag_coefficient_nonrel(glass, 300.0, {}, -1.0),
                    bbrad::domain_error);
}

TEST_CASE("temperature scaling: T^4 for the electron, T^8 for the sphere") {
  const double e_ratio = bbrad::drag_closed_form(electron, 600.0).value /
                         bbrad::drag_closed_form(electron, 300.0).value;
  REQUIRE(e_ratio == Approx(16.0).epsilon(1e-12));
  const double s_ratio = bbrad::drag_closed_form(glass, 600.0).value /
                         bbrad::drag_closed_form(glass, 300.0).value;
  REQUIRE(s_ratio == Approx(256.0).epsilon(1e-12));
}

TEST_CASE("narrow-line two-level drag matches the resolved quadrature") {
  // x0 = hbar omega0 / k_B T near 3; fractional linewidth 5e-8
  const bbrad::TwoLevelModel atom{2e15, 1e-18, 1e8, 1.0, 0.0};
  const double T = 5000.0;
  const auto closed = bbrad::two_level_drag(atom, T);
  const auto quad = bbrad::drag_coefficient_nonrel(bbrad::PolarizabilityModel{atom}, T);
  REQUIRE(quad.force_per_velocity.value == Approx(closed.value).epsilon(1e-2));
  REQUIRE(closed.value > 0.0);
}

TEST_CASE("population inversion reverses the sign of the drag") {
  const bbrad::TwoLevelModel gain{2e15, 1e-18, 1e8, 0.0, 1.0};
  const auto d = bbrad::drag_coefficient_nonrel(bbrad::PolarizabilityModel{gain}, 5000.0);
  REQUIRE(d.force_per_velocity.value < 0.0);
}

TEST_CASE("closed form refuses the two-level model") {
  const bbrad::PolarizabilityModel atom = bbrad::TwoLevelModel{2e15, 1e-18, 1e8, 1.0, 0.0};
  REQUIRE_THROWS_AS(bbrad::drag_closed_form(atom, 300.0), bbrad::unsupported_model_error);
}

TEST_CASE("relativistic state construction and validation") {
  REQUIRE_THROWS_AS(bbrad::RelativisticState::make(c, 300.0, 300.0), bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::RelativisticState::make(0.1 * c, 300.0, 0.0),
                    bbrad::domain_error);
  auto st = bbrad::RelativisticState::make(0.5 * c, 300.0, 300.0);
  REQUIRE(st.gamma == Approx(1.0 / std::sqrt(0.75)).epsilon(1e-14));
  st.gamma *= 1.0 + 1e-9;
  REQUIRE_THROWS_AS(st.validate(), bbrad::domain_error);
}

TEST_CASE("induced force vanishes identically at rest") {
  const auto st = bbrad::RelativisticState::make(0.0, 300.0, 300.0);
  REQUIRE(bbrad::force_induced(st, glass).value == 0.0);
}

TEST_CASE("total force refuses v = 0 and opposes slow motion in equilibrium") {
  REQUIRE_THROWS_AS(
      bbrad::total_force_relativistic(bbrad::RelativisticState::make(0.0, 300.0, 300.0),
                                      glass),
      bbrad::domain_error);
  const auto st = bbrad::RelativisticState::make(1e-3 * c, 300.0, 300.0);
  REQUIRE(bbrad::total_force_relativistic(st, glass).value < 0.0);
}

TEST_CASE("direct total force equals the three-piece composition") {
  for (const double beta : {0.3, 0.7}) {
    for (const double t_ratio : {1.0, 2.0}) {
      const auto st = bbrad::RelativisticState::make(beta * c, 300.0, 300.0 * t_ratio);
      const auto direct = bbrad::total_force_relativistic(st, glass);
      const auto composed = bbrad::total_force_composed(st, glass);
      REQUIRE(direct.value == Approx(composed.value).epsilon(1e-10));
      REQUIRE(std::string(direct.unit.gaussian) == "dyn");
    }
  }
}

TEST_CASE("small-velocity slope of the total force is minus the drag coefficient") {
  const double h = 1e-4 * c;
  const auto st = bbrad::RelativisticState::make(h, 300.0, 300.0);
  const double slope = bbrad::total_force_relativistic(st, glass).value / h;
  const double mxi = bbrad::drag_coefficient_nonrel(glass, 300.0).force_per_velocity.value;
  REQUIRE(slope == Approx(-mxi).epsilon(1e-6));
}

TEST_CASE("vacuum friction on a decaying excited atom") {
  const double v = 1e8;
  const double w0 = 2e15;
  const double G = 1e8;
  const auto f0 = bbrad::vacuum_friction_excited_atom(v, w0, G, 0.0);
  REQUIRE(f0.value < 0.0);
  REQUIRE(f0.value ==
          Approx(-v / (c * c) * bbrad::constants::hbar * w0 * G).epsilon(1e-14));
  const auto f1 = bbrad::vacuum_friction_excited_atom(v, w0, G, 1.0 / G);
  REQUIRE(f1.value / f0.value == Approx(std::exp(-1.0)).epsilon(1e-14));
  REQUIRE(bbrad::vacuum_friction_excited_atom(v, w0, 0.0, 1.0).value == 0.0);
  REQUIRE_THROWS_AS(bbrad::vacuum_friction_excited_atom(0.2 * c, w0, G, 0.0),
                    bbrad::regime_error);
  REQUIRE_THROWS_AS(bbrad::vacuum_friction_excited_atom(v, w0, G, -1.0),
                    bbrad::domain_error);
}
