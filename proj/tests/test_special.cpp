// Occupation functions, zeta, Bose integrals, and spherical Bessel helpers.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

TEST_CASE("zeta agrees with the standard library implementation") {
  for (int s = 2; s <= 12; ++s) {
    REQUIRE(bbrad::riemann_zeta(s) ==
            Approx(std::riemann_zeta(static_cast<double>(s))).epsilon(1e-14));
  }
  REQUIRE(bbrad::riemann_zeta(2.0) ==
          Approx(bbrad::constants::pi * bbrad::constants::pi / 6.0).epsilon(1e-14));
}

TEST_CASE("occupation number limits") {
  // small argument: 1/x - 1/2 + x/12
  const double x = 1e-4;
  REQUIRE(bbrad::bose_occupation(x) ==
          Approx(1.0 / x - 0.5 + x / 12.0).epsilon(1e-10));
  // large argument: e^{-x}
  REQUIRE(bbrad::bose_occupation(30.0) == Approx(std::exp(-30.0)).epsilon(1e-12));
  // fluctuation weight is n^2 + n = n(n+1)
  const double n = bbrad::bose_occupation(1.7);
  REQUIRE(bbrad::bose_occupation_fluct(1.7) == Approx(n * (n + 1.0)).epsilon(1e-14));
}

TEST_CASE("statistics weights decompose additively") {
  for (const double x : {0.3, 1.0, 4.0, 12.0}) {
    const double p = bbrad::statistics_weight(x, bbrad::Statistics::particle_n);
    const double w = bbrad::statistics_weight(x, bbrad::Statistics::wave_n2);
    const double f = bbrad::statistics_weight(x, bbrad::Statistics::full_n2_plus_n);
    REQUIRE(f == Approx(p + w).epsilon(1e-14));
    REQUIRE(p == Approx(bbrad::bose_occupation(x)).epsilon(1e-14));
  }
}

TEST_CASE("Bose integrals match Gamma times zeta") {
  const auto p4 = bbrad::bose_integral(4.0, bbrad::Statistics::particle_n);
  REQUIRE(p4.value == Approx(24.0 * bbrad::riemann_zeta(5.0)).epsilon(1e-13));
  const auto f4 = bbrad::bose_integral(4.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(f4.value == Approx(24.0 * bbrad::riemann_zeta(4.0)).epsilon(1e-13));
  const auto f8 = bbrad::bose_integral(8.0, bbrad::Statistics::full_n2_plus_n);
  REQUIRE(f8.value == Approx(40320.0 * bbrad::riemann_zeta(8.0)).epsilon(1e-13));

  REQUIRE_THROWS_AS(bbrad::bose_integral(4.0, bbrad::Statistics::wave_n2),
                    bbrad::domain_error);
  REQUIRE_THROWS_AS(bbrad::bose_integral(1.0, bbrad::Statistics::particle_n),
                    bbrad::domain_error);
}

TEST_CASE("statistics ratios that set the measurable contrasts") {
  // weight x^4: particle share zeta(5)/zeta(4)
  const double r4 = bbrad::riemann_zeta(5.0) / bbrad::riemann_zeta(4.0);
  REQUIRE(r4 == Approx(0.9580573740322349).epsilon(1e-12));
  // weight x^8: particle share zeta(9)/zeta(8)
  const double r8 = bbrad::riemann_zeta(9.0) / bbrad::riemann_zeta(8.0);
  REQUIRE(r8 == Approx(0.9979394382722697).epsilon(1e-12));
  REQUIRE(r8 > 0.9978);
  REQUIRE(r8 < 0.9982);
}

TEST_CASE("spherical Bessel functions and the j1/x limit") {
  const double x = 2.3;
  REQUIRE(bbrad::spherical_bessel(0, x) == Approx(std::sin(x) / x).epsilon(1e-14));
  REQUIRE(bbrad::spherical_bessel(1, x) ==
          Approx(std::sin(x) / (x * x) - std::cos(x) / x).epsilon(1e-13));
  REQUIRE(bbrad::spherical_bessel(2, x) ==
          Approx((3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x))
              .epsilon(1e-12));
  // j1(x)/x -> 1/3 as x -> 0, with no cancellation blowup
  REQUIRE(bbrad::spherical_bessel_j1_over_x(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(bbrad::spherical_bessel_j1_over_x(1e-8) == Approx(1.0 / 3.0).epsilon(1e-12));
  REQUIRE(bbrad::spherical_bessel_j1_over_x(2.3) ==
          Approx(bbrad::spherical_bessel(1, 2.3) / 2.3).epsilon(1e-13));
}
