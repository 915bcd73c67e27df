// Two-dipole interference kernel, emission rates, the decoherence factor,
// and its small-separation scattering constant.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "bbrad/bbrad.hpp"

using Catch::Approx;

namespace {
const bbrad::PolarizabilityModel glass = bbrad::SphereModel{1e-6, {2.1, 0.0}};
const double pi = bbrad::constants::pi;
} // namespace

TEST_CASE("angular kernel value at zero separation") {
  REQUIRE(bbrad::angular_kernel(0.0) == Approx(64.0 * pi * pi / 3.0).epsilon(1e-14));
  // continuity through the small-x series switchover
  REQUIRE(bbrad::angular_kernel(1e-6) ==
          Approx(64.0 * pi * pi / 3.0).epsilon(1e-10));
}

TEST_CASE("angular kernel agrees with the two-sphere cubature") {
  for (const double x : {0.5, 2.0, 10.0}) {
    const double direct = bbrad::detail::kernel_cubature(x);
    REQUIRE(bbrad::angular_kernel(x) == Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("angular kernel is nonnegative and envelope-bounded") {
  for (double x = 0.25; x < 40.0; x += 0.25) {
    const double v = bbrad::angular_kernel(x);
    REQUIRE(v >= 0.0);
    if (x >= 5.0) REQUIRE(v <= 32.0 * pi * pi / (x * x) * (1.0 + 1e-12));
  }
}

TEST_CASE("pair emission rates: interference never exceeds the direct rate") {
  for (const double d : {1e-5, 1e-4, 1e-3, 1e-2}) {
    const auto rates = bbrad::emission_rates(glass, 300.0, {d});
    REQUIRE(rates.r11.value > 0.0);
    REQUIRE(rates.r12.value >= 0.0);
    REQUIRE(rates.r12.value <= rates.r11.value * (1.0 + 1e-10));
  }
}

TEST_CASE("decoherence factor: zero at contact, nonnegative, saturating") {
  REQUIRE(bbrad::decoherence_factor(glass, 300.0, 0.0).value == 0.0);
  double prev = 0.0;
  for (const double d : {1e-6, 1e-5, 1e-4}) {
    const double F = bbrad::decoherence_factor(glass, 300.0, d).value;
    REQUIRE(F >= 0.0);
    REQUIRE(F > prev);  // growing well below saturation
    prev = F;
  }
  // far separation: the interference term dies off and F -> r11.
  // 0.015 cm is ~20 thermal wavenumbers at 300 K, far enough that the
  // interference envelope is below 2e-4 of the direct rate, yet the
  // oscillation panels stay within the subdivision budget.
  const double d_far = 0.015;
  const auto rates = bbrad::emission_rates(glass, 300.0, {d_far});
  const double F_far = bbrad::decoherence_factor(glass, 300.0, d_far).value;
  REQUIRE(F_far == Approx(rates.r11.value).epsilon(1e-3));
}

TEST_CASE("small-separation limit reproduces the scattering constant") {
  const auto s = std::get<bbrad::SphereModel>(glass);
  for (const double T : {100.0, 300.0, 1000.0}) {
    const auto lam_direct = bbrad::scattering_constant_lambda(s, T);
    const auto lam_limit = bbrad::lambda_from_limit(glass, T);
    REQUIRE(lam_limit.value == Approx(lam_direct.value).epsilon(1e-2));
    REQUIRE(std::string(lam_limit.unit.gaussian) == "cm^-2 s^-1");
  }
}

TEST_CASE("quadratic growth at small separation") {
  const auto s = std::get<bbrad::SphereModel>(glass);
  const double lam = bbrad::scattering_constant_lambda(s, 300.0).value;
  const double lam_th =
      bbrad::constants::hbar * bbrad::constants::c /
      (bbrad::constants::k_B * 300.0);
  const double d = lam_th / 100.0;
  const double F = bbrad::decoherence_factor(glass, 300.0, d).value;
  REQUIRE(F == Approx(lam * d * d).epsilon(2e-3));
}

TEST_CASE("sampled curve carries a consistent fitted constant") {
  const double lam_th =
      bbrad::constants::hbar * bbrad::constants::c / (bbrad::constants::k_B * 300.0);
  std::vector<double> seps;
  for (int i = 1; i <= 4; ++i) seps.push_back(lam_th * i / 400.0);
  const auto curve = bbrad::decoherence_curve(glass, 300.0, seps, {});
  REQUIRE(curve.separations.size() == seps.size());
  REQUIRE(curve.F_values.size() == seps.size());
  const auto s = std::get<bbrad::SphereModel>(glass);
  REQUIRE(curve.lambda_fit ==
          Approx(bbrad::scattering_constant_lambda(s, 300.0).value).epsilon(2e-2));
  REQUIRE(curve.lambda_residual < 5e-2 * curve.lambda_fit);
}

TEST_CASE("negative separation is rejected") {
  REQUIRE_THROWS_AS(bbrad::decoherence_factor(glass, 300.0, -1e-4), bbrad::domain_error);
}
