#pragma once

#include <cmath>
#include <string>

#include "bbrad/errors.hpp"
#include "bbrad/quadrature.hpp"
#include "bbrad/result.hpp"

namespace bbrad {

// Which occupation-number weight enters a thermal integral:
//   particle_n        -> n
//   wave_n2           -> n^2
//   full_n2_plus_n    -> n^2 + n
enum class Statistics { particle_n, wave_n2, full_n2_plus_n };

inline const char* statistics_name(Statistics s) {
  switch (s) {
    case Statistics::particle_n:     return "particle_n";
    case Statistics::wave_n2:        return "wave_n2";
    case Statistics::full_n2_plus_n: return "full_n2_plus_n";
  }
  return "unknown";
}

// Mean occupation 1/(e^x - 1) for x = hbar*omega / k_B T.
// Below x = 1e-4 the Laurent series keeps full relative accuracy where
// expm1-based evaluation starts to lose the 1/x cancellation structure.
inline double bose_occupation(double x) {
  if (!(x > 0.0)) throw domain_error("bose_occupation: requires x > 0");
  if (x < 1e-4) return 1.0 / x - 0.5 + x / 12.0;
  return 1.0 / std::expm1(x);
}

// n^2 + n = e^x / (e^x - 1)^2, evaluated without cancellation.
inline double bose_occupation_fluct(double x) {
  if (!(x > 0.0)) throw domain_error("bose_occupation_fluct: requires x > 0");
  const double u = std::expm1(x);
  return (1.0 + u) / (u * u);
}

// Occupation weight for the requested statistics.
inline double statistics_weight(double x, Statistics s) {
  switch (s) {
    case Statistics::particle_n:
      return bose_occupation(x);
    case Statistics::wave_n2: {
      const double n = bose_occupation(x);
      return n * n;
    }
    case Statistics::full_n2_plus_n:
      return bose_occupation_fluct(x);
  }
  throw domain_error("statistics_weight: unknown statistics");
}

// Riemann zeta for real s > 1, via Euler-Maclaurin summation.
// Relative error below 1e-13 for s >= 1.05.
inline double riemann_zeta(double s) {
  if (!(s > 1.0)) throw domain_error("riemann_zeta: requires s > 1");
  constexpr int N = 20;
  // Bernoulli numbers B_2, B_4, ..., B_12.
  constexpr double bern[6] = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                              -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
  double sum = 0.0;
  for (int k = 1; k < N; ++k) sum += std::pow(k, -s);
  const double Ns = std::pow(N, -s);
  sum += 0.5 * Ns;                    // trapezoid endpoint
  sum += Ns * N / (s - 1.0);          // integral tail
  // Correction terms B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1).
  double rising = s;                  // s(s+1)...(s+2j-2), starts at j=1
  double fact = 2.0;                  // (2j)!
  double npow = Ns / N;               // N^(-s-2j+1), starts at N^(-s-1)
  for (int j = 0; j < 6; ++j) {
    sum += bern[j] / fact * rising * npow;
    // advance to j+1
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    fact *= (2.0 * j + 3.0) * (2.0 * j + 4.0);
    npow /= static_cast<double>(N) * static_cast<double>(N);
  }
  return sum;
}

// Integral of x^s times an occupation weight over (0, inf):
//   particle_n:      Gamma(s+1) * zeta(s+1)
//   full_n2_plus_n:  Gamma(s+1) * zeta(s)
// Both the closed form and an adaptive quadrature are evaluated and
// cross-checked to 1e-10; disagreement raises consistency_error.
inline RateResult bose_integral(double s, Statistics kind,
                                const QuadratureConfig& cfg = {}) {
  if (!(s >= 2.0)) throw domain_error("bose_integral: requires s >= 2");
  if (kind == Statistics::wave_n2) {
    throw domain_error("bose_integral: wave_n2 has no single Gamma*zeta closed form; "
                       "use the difference of the other two kinds");
  }
  const double closed =
      kind == Statistics::particle_n
          ? std::tgamma(s + 1.0) * riemann_zeta(s + 1.0)
          : std::tgamma(s + 1.0) * riemann_zeta(s);

  auto integrand = [s, kind](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, s) * statistics_weight(x, kind);
  };
  const Integral quad = integrate_semi_infinite(integrand, 1.0, cfg);

  const double rel = std::abs(quad.value - closed) / std::abs(closed);
  if (rel > 1e-10) {
    throw consistency_error("bose_integral: closed form and quadrature disagree",
                            closed, quad.value, 1e-10);
  }
  return {closed, units::dimensionless, std::max(quad.err, rel * std::abs(closed)),
          Method::closed_form};
}

// Spherical Bessel functions j_0, j_1, j_2 for x >= 0.
// Power series below x = 0.1 avoids cancellation in the trig forms.
inline double spherical_bessel(int n, double x) {
  if (x < 0.0) throw domain_error("spherical_bessel: requires x >= 0");
  if (n < 0 || n > 2) throw domain_error("spherical_bessel: order must be 0, 1, or 2");
  const double x2 = x * x;
  if (x < 0.1) {
    switch (n) {
      case 0: return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
      case 1: return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
      case 2: return x2 / 15.0 * (1.0 - x2 / 14.0 * (1.0 - x2 / 36.0));
    }
  }
  const double sx = std::sin(x), cx = std::cos(x);
  switch (n) {
    case 0: return sx / x;
    case 1: return sx / x2 - cx / x;
    case 2: return (3.0 / (x2 * x) - 1.0 / x) * sx - 3.0 / x2 * cx;
  }
  return 0.0;
}

// j_1(x)/x, finite at x = 0 (value 1/3).
inline double spherical_bessel_j1_over_x(double x) {
  if (x < 0.0) throw domain_error("spherical_bessel_j1_over_x: requires x >= 0");
  const double x2 = x * x;
  if (x < 0.1) return (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0)) / 3.0;
  return spherical_bessel(1, x) / x;
}

} // namespace bbrad
