#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "bbrad/constants.hpp"
#include "bbrad/errors.hpp"

namespace bbrad {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
  // Upper limit of semi-infinite integrals, in units of the caller's scale.
  // Integrands here decay at least as fast as x^9 exp(-x).
  double tail_cutoff = 60.0;
};

struct Integral {
  double value;
  double err;
  int panels;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half).
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double err;
};

// One 15-point Kronrod rule with the embedded 7-point Gauss rule.
// Error scaling follows the standard practice for this rule pair.
template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
  const double hlgth = 0.5 * (b - a);
  const double centr = 0.5 * (a + b);

  double fv1[7], fv2[7];
  const double fc = f(centr);
  double resg = fc * gk_wg[3];
  double resk = fc * gk_wk[7];
  double resabs = std::abs(resk);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * gk_x[jtw];
    fv1[jtw] = f(centr - absc);
    fv2[jtw] = f(centr + absc);
    const double fsum = fv1[jtw] + fv2[jtw];
    resg += gk_wg[j] * fsum;
    resk += gk_wk[jtw] * fsum;
    resabs += gk_wk[jtw] * (std::abs(fv1[jtw]) + std::abs(fv2[jtw]));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * gk_x[jtwm1];
    fv1[jtwm1] = f(centr - absc);
    fv2[jtwm1] = f(centr + absc);
    const double fsum = fv1[jtwm1] + fv2[jtwm1];
    resk += gk_wk[jtwm1] * fsum;
    resabs += gk_wk[jtwm1] * (std::abs(fv1[jtwm1]) + std::abs(fv2[jtwm1]));
  }

  const double reskh = resk * 0.5;
  double resasc = gk_wk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += gk_wk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double value = resk * hlgth;
  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);

  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50) {
    err = std::max(eps50 * resabs, err);
  }
  return {value, err};
}

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b].
// `breakpoints` seeds the initial subdivision (strictly inside (a, b));
// use it when the integrand has known narrow features.
template <class F>
Integral integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {},
                   std::vector<double> breakpoints = {}) {
  if (!(b > a)) throw domain_error("integrate: upper limit must exceed lower limit");
  if (cfg.max_subdivisions < 1) throw domain_error("integrate: max_subdivisions must be positive");

  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::priority_queue<detail::Panel> heap;
  double total = 0.0, total_err = 0.0;
  int panels = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i], hi = breakpoints[i + 1];
    if (lo < a || hi > b) continue;
    auto est = detail::gk15(f, lo, hi);
    if (!std::isfinite(est.value)) {
      throw domain_error("integrate: integrand produced a non-finite value");
    }
    heap.push({lo, hi, est.value, est.err});
    total += est.value;
    total_err += est.err;
    ++panels;
  }

  auto tol = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

  while (total_err > tol() && panels < cfg.max_subdivisions) {
    detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel narrower than machine resolution; cannot refine further.
      heap.push(worst);
      break;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    if (!std::isfinite(left.value) || !std::isfinite(right.value)) {
      throw domain_error("integrate: integrand produced a non-finite value");
    }
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push({worst.a, mid, left.value, left.err});
    heap.push({mid, worst.b, right.value, right.err});
    ++panels;
  }

  if (total_err > tol()) {
    throw convergence_error("integrate: tolerance not reached within subdivision budget",
                            total, total_err);
  }
  return {total, total_err, panels};
}

// Integral of f over [0, infinity) for integrands that decay on the scale
// `scale` (at least as fast as a power times exp(-x/scale) beyond a few
// scales). Truncates at cfg.tail_cutoff * scale.
template <class F>
Integral integrate_semi_infinite(F&& f, double scale, const QuadratureConfig& cfg = {},
                                 std::vector<double> breakpoints = {}) {
  if (!(scale > 0.0)) throw domain_error("integrate_semi_infinite: scale must be positive");
  if (cfg.tail_cutoff < 30.0) {
    throw domain_error("integrate_semi_infinite: tail_cutoff below 30 truncates thermal tails");
  }
  const double upper = cfg.tail_cutoff * scale;
  // Seed panels around the typical peak location of x^s exp(-x)-like weights.
  breakpoints.push_back(1.0 * scale);
  breakpoints.push_back(5.0 * scale);
  breakpoints.push_back(15.0 * scale);
  std::erase_if(breakpoints, [&](double x) { return x <= 0.0 || x >= upper; });
  return integrate(f, 0.0, upper, cfg, std::move(breakpoints));
}

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration.
// Used for fixed-order product rules (angular oracles, bin averages).
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw domain_error("gauss_legendre: order must be positive");
  GaussLegendre rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double xi = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -xi;
    rule.x[n - 1 - i] = xi;
    rule.w[i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

} // namespace bbrad
