#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "starspec/errors.hpp"
#include "starspec/linalg.hpp"

namespace starspec {

// Modified Bessel function of the second kind K_nu(x) for real orders in
// [-3/2, 3/2] (K is even in nu) and x > 0.
//
// Two branches, split at x = 2:
//  * small x: Temme's series gives K_mu and K_{mu+1} for |mu| <= 1/2,
//    then forward recurrence reaches the target order;
//  * large x: K_nu(x) = e^{-x} int_0^inf e^{-x (cosh t - 1)} cosh(nu t) dt,
//    integrated with adaptive Simpson.

struct BesselEval {
  double nu = 0.0;
  double x = 0.0;
  double value = 0.0;
  double est_error = 0.0;
};

inline constexpr double kBesselSeam = 2.0;
inline constexpr double kBesselMaxOrder = 1.5;

namespace detail {

// (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) and the matching mean, plus the
// two reciprocal gammas themselves.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

inline TemmeGammas temme_gammas(double mu) {
  TemmeGammas g;
  g.gampl = 1.0 / std::tgamma(1.0 + mu);
  g.gammi = 1.0 / std::tgamma(1.0 - mu);
  g.gam2 = 0.5 * (g.gammi + g.gampl);
  if (std::abs(mu) >= 1e-3) {
    g.gam1 = (g.gammi - g.gampl) / (2.0 * mu);
  } else {
    // Odd part of 1/Gamma(1+x) = 1 + a2 x + a3 x^2 + a4 x^3 + ...
    constexpr double a2 = 0.5772156649015329, a4 = -0.0420026350340952, a6 = -0.0421977345555443;
    const double m2 = mu * mu;
    g.gam1 = -(a2 + m2 * (a4 + m2 * a6));
  }
  return g;
}

struct TemmePair {
  double k_mu, k_mu1, last_term;
};

inline TemmePair temme_series(double mu, double x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto g = temme_gammas(mu);
  const double x2 = 0.5 * x;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
  double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / g.gampl;
  double q = 0.5 / (e * g.gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  double del = 0.0;
  for (int i = 1; i < 500; ++i) {
    const double fi = i;
    ff = (fi * ff + p + q) / (fi * fi - mu * mu);
    c *= d / fi;
    p /= (fi - mu);
    q /= (fi + mu);
    del = c * ff;
    sum += del;
    const double del1 = c * (p - fi * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * eps) break;
  }
  return {sum, sum1 * 2.0 / x, std::abs(del)};
}

struct SimpsonState {
  double value;
  double error;
};

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth, double& err) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // The floor keeps rounding noise from driving the recursion to full depth.
  if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, 1e-17)) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err);
}

// e^{x} K_nu(x) from the integral representation.
inline SimpsonState scaled_k_integral(double nu, double x) {
  auto f = [nu, x](double t) { return std::exp(-x * (std::cosh(t) - 1.0) + nu * t) * 0.5 +
                                      std::exp(-x * (std::cosh(t) - 1.0) - nu * t) * 0.5; };
  // Cut the tail once the integrand is below 1e-18 of its value at 0.
  double upper = 1.0;
  while (x * (std::cosh(upper) - 1.0) - std::abs(nu) * upper < 42.0) upper *= 1.25;
  double err = 0.0;
  // Split into panels so the adaptive rule never sees a nearly flat
  // function on the first try.
  const int panels = 8;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = upper * i / panels, b = upper * (i + 1) / panels;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson(f, a, b, fa, fm, fb, whole, 1e-14 / panels, 30, err);
  }
  return {total, err};
}

}  // namespace detail

inline void check_bessel_domain(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::DomainError, "Bessel K needs x > 0, got " + std::to_string(x));
  if (!std::isfinite(nu) || std::abs(nu) > kBesselMaxOrder + 1e-12)
    fail(ErrorCode::DomainError, "Bessel K order outside [-3/2, 3/2]: " + std::to_string(nu));
}

// Small-x branch; exposed for testing the seam.
inline BesselEval bessel_k_series(double nu, double x) {
  check_bessel_domain(nu, x);
  const double a = std::abs(nu);
  const int nl = int(a + 0.5);
  const double mu = a - nl;
  const auto t = detail::temme_series(mu, x);
  double k_lo = t.k_mu, k_hi = t.k_mu1;
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * (2.0 / x) * k_hi + k_lo;
    k_lo = k_hi;
    k_hi = next;
  }
  const double rel = t.last_term / std::abs(t.k_mu) + 8.0 * std::numeric_limits<double>::epsilon();
  return {nu, x, k_lo, rel * k_lo};
}

// Large-x branch; valid for every x > 0 but only used beyond the seam.
inline BesselEval bessel_k_integral(double nu, double x) {
  check_bessel_domain(nu, x);
  const auto s = detail::scaled_k_integral(std::abs(nu), x);
  const double scale = std::exp(-x);
  return {nu, x, s.value * scale, (s.error + 4.0 * std::numeric_limits<double>::epsilon() * s.value) * scale};
}

inline BesselEval bessel_k_eval(double nu, double x) {
  check_bessel_domain(nu, x);
  return x < kBesselSeam ? bessel_k_series(nu, x) : bessel_k_integral(nu, x);
}

inline double bessel_k(double nu, double x) { return bessel_k_eval(nu, x).value; }

// K'_nu(x) = -K_{|nu|-1}(x) - (|nu|/x) K_{|nu|}(x).
inline double bessel_k_prime(double nu, double x) {
  check_bessel_domain(nu, x);
  const double a = std::abs(nu);
  return -bessel_k(a - 1.0, x) - a / x * bessel_k(a, x);
}

}  // namespace starspec
