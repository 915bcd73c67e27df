// Decoherence factor of a sphere pair against separation, from the
// quadratic small-distance regime through saturation, printed as CSV
// together with the quadratic model Lambda d^2.

#include <cmath>
#include <cstdio>
#include <vector>

#include "bbrad/bbrad.hpp"

int main() {
  const double T = 300.0;
  const bbrad::SphereModel sphere{1e-6, {2.1, 0.0}};
  const bbrad::PolarizabilityModel model{sphere};

  const double lam_th =
      bbrad::constants::hbar * bbrad::constants::c / (bbrad::constants::k_B * T);
  std::vector<double> seps;
  for (double d = lam_th / 1000.0; d <= 10.0 * lam_th; d *= std::pow(10.0, 0.25)) {
    seps.push_back(d);
  }

  const auto curve = bbrad::decoherence_curve(model, T, seps, {});
  const double lambda = bbrad::scattering_constant_lambda(sphere, T).value;
  const double saturation = bbrad::emission_rates(model, T, {0.0}, {}).r11.value;

  std::printf("separation_over_lambda_th,F,quadratic_model,saturation\n");
  for (std::size_t i = 0; i < curve.separations.size(); ++i) {
    const double d = curve.separations[i];
    std::printf("%.6e,%.12e,%.12e,%.12e\n", d / lam_th, curve.F_values[i],
                lambda * d * d, saturation);
  }
  std::printf("# fitted lambda %.12e vs closed form %.12e\n", curve.lambda_fit, lambda);
  return 0;
}
