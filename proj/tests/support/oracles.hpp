#pragma once

// Test-side references that do not go through the library's numerics: a
// direct 2x2 monodromy product and a plain bisection root finder, plus the
// fixed-seed configuration generator.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"

namespace oracle {

using cd = std::complex<double>;
using M2 = std::array<cd, 4>;  // row-major

inline constexpr double pi = std::numbers::pi;

inline M2 mul(const M2& x, const M2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

// A_j = (1/p) [[m, tau e^{-i w (2l+1)}], [tau e^{i w (2l+1)}, m]] with w the
// angle of edge j-1, and the wrap-around matrix
// (1/p_1) [[m e^{-2 pi i l}, tau e^{i(w1 (2l+1) - 2 pi l)}], [..., m e^{2 pi i l}]].
inline M2 monodromy(const std::vector<double>& omegas, const std::vector<double>& taus, double lambda) {
  const std::size_t n = taus.size();
  auto pm = [](double t) { return std::pair{1.0 - t * t / 4.0, 1.0 + t * t / 4.0}; };
  M2 t{1.0, 0.0, 0.0, 1.0};
  for (std::size_t j = 2; j <= n; ++j) {
    const double tau = taus[j - 1];
    const auto [p, m] = pm(tau);
    const double w = omegas[j - 2];
    const cd e = std::exp(cd(0.0, -w * (2.0 * lambda + 1.0)));
    t = mul(t, M2{m / p, tau * e / p, tau * std::conj(e) / p, m / p});
  }
  const double tau = taus[0];
  const auto [p, m] = pm(tau);
  const double w = omegas[0];
  const cd off = std::exp(cd(0.0, w * (2.0 * lambda + 1.0) - 2.0 * pi * lambda));
  const cd d = std::exp(cd(0.0, 2.0 * pi * lambda));
  return mul(t, M2{m * std::conj(d) / p, tau * off / p, tau * std::conj(off) / p, m * d / p});
}

inline double secular(const std::vector<double>& omegas, const std::vector<double>& taus, double lambda) {
  const M2 t = monodromy(omegas, taus, lambda);
  return (t[0] + t[3]).real() - 2.0;
}

inline double identity_defect(const std::vector<double>& omegas, const std::vector<double>& taus, double lambda) {
  M2 t = monodromy(omegas, taus, lambda);
  t[0] -= 1.0;
  t[3] -= 1.0;
  double s = 0.0;
  for (const auto& z : t) s += std::norm(z);
  return std::sqrt(s);
}

// Interior angles omega_1..omega_{N-1} of the equally spaced graph.
inline std::vector<double> symmetric_omegas(std::size_t n) {
  std::vector<double> w(n - 1);
  for (std::size_t j = 1; j < n; ++j) w[j - 1] = (2.0 * double(j) - 1.0) * pi / double(n);
  return w;
}

// Sign changes of f on a uniform grid, each bisected to width 1e-14.
template <class F>
std::vector<double> bisection_roots(F f, double lo, double hi, std::size_t cells) {
  std::vector<double> out;
  const double h = (hi - lo) / double(cells);
  double a = lo, fa = f(a);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double b = lo + h * double(i), fb = f(b);
    if (fa == 0.0) {
      out.push_back(a);
    } else if (fa * fb < 0.0) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > 1e-14) {
        const double mid = 0.5 * (x0 + x1), fm = f(mid);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = mid;
          f0 = fm;
        } else {
          x1 = mid;
        }
      }
      out.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
  return out;
}

// Fixed-seed random configurations. Strengths stay 0.05 away from the
// confinement values so the tests do not hinge on ill-conditioning.
class ConfigSource {
 public:
  explicit ConfigSource(std::uint64_t seed) : rng_(seed) {}

  double tau() {
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (;;) {
      const double t = d(rng_);
      if (std::abs(std::abs(t) - 2.0) >= 0.05) return t;
    }
  }

  std::size_t edges(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  // Interior angles from random sector widths, each at least 0.1; the
  // first sector is centred on theta = 0.
  std::vector<double> angles(std::size_t n) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> widths(n);
    double total = 0.0;
    for (auto& x : widths) total += (x = d(rng_));
    const double spare = 2.0 * pi - 0.1 * double(n);
    for (auto& x : widths) x = 0.1 + spare * x / total;
    std::vector<double> w(n - 1);
    double at = widths[0] / 2.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      w[j] = at;
      at += widths[j + 1];
    }
    return w;
  }

  starspec::StarGraph graph(std::size_t n, bool symmetric) {
    std::vector<double> taus(n);
    for (auto& t : taus) t = tau();
    if (symmetric) return starspec::StarGraph::symmetric(n, taus);
    return starspec::StarGraph::general(angles(n), taus);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
