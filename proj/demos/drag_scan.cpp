// Temperature scan of the drag coefficient for the two closed-form models,
// printed as CSV with the relative distance to the closed form.

#include <cmath>
#include <cstdio>

#include "bbrad/bbrad.hpp"

int main() {
  const bbrad::PolarizabilityModel models[] = {
      bbrad::ElectronModel{},
      bbrad::SphereModel{1e-6, {2.1, 0.0}},
  };
  const char* names[] = {"electron", "sphere"};

  std::printf("model,temperature,m_xi,closed_form,rel_diff,xi_for_1e-14g\n");
  for (int m = 0; m < 2; ++m) {
    for (double T = 100.0; T <= 1000.0 + 1e-9; T *= std::pow(10.0, 0.25)) {
      const auto d = bbrad::drag_coefficient_nonrel(models[m], T, {}, 1e-14);
      const auto closed = bbrad::drag_closed_form(models[m], T);
      const double rel = std::abs(d.force_per_velocity.value - closed.value) /
                         closed.value;
      std::printf("%s,%.6g,%.12e,%.12e,%.3e,%.12e\n", names[m], T,
                  d.force_per_velocity.value, closed.value, rel, d.xi->value);
    }
  }
  return 0;
}
