#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "starspec/errors.hpp"

namespace starspec {

// Brent's method on a sign-changing bracket. Runs to machine precision
// unless xtol asks for less.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, double xtol = 0.0, int max_iter = 300) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) fail(ErrorCode::SolverDiverged, "brent_root: bracket has no sign change");

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  fail(ErrorCode::SolverDiverged, "brent_root: no convergence");
}

struct MinimumPoint {
  double x;
  double value;
};

// Golden-section search for a minimum of f on [a, b].
template <class F>
MinimumPoint golden_minimize(F&& f, double a, double b, double xtol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  const double floor_tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
  while (b - a > std::max(xtol, floor_tol)) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? MinimumPoint{x1, f1} : MinimumPoint{x2, f2};
}

struct RootHit {
  double x;
  int multiplicity;
  double residual;  // |f(x)|
  double defect;    // distance-to-double-root indicator at x
  bool parabolic = false;
};

struct RootSearchOptions {
  double cells_per_unit = 8192.0;
  std::size_t pad_cells = 4;
  double residual_tol = 1e-9;  // applied to |f| / scale
  double double_tol = 1e-8;    // defect below this means a double root
  double merge_tol = 1e-9;
};

// Finds the zeros of a real function f on [lo, hi] by grid scanning.
// Simple zeros show up as sign changes and are refined with Brent. Double
// zeros of the underlying problem are tangential, so every local minimum of
// |f| without a sign change is examined as well: the signed extremum in
// that cell either dips through zero (a close pair of simple roots) or it
// does not, in which case the defect function (which has a V-shaped zero
// exactly at double roots) decides.
template <class F, class D>
std::vector<RootHit> locate_roots(F&& f, D&& defect, double lo, double hi, double scale,
                                  const RootSearchOptions& opt) {
  if (!(hi > lo)) fail(ErrorCode::InvalidInput, "root window must have lo < hi");
  const double h0 = 1.0 / opt.cells_per_unit;
  const auto cells = std::size_t(std::ceil((hi - lo) / h0)) + 2 * opt.pad_cells;
  const double h = (hi - lo) / double(cells - 2 * opt.pad_cells);
  const double start = lo - double(opt.pad_cells) * h;

  std::vector<double> xs(cells + 1), fs(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    xs[i] = start + double(i) * h;
    fs[i] = f(xs[i]);
  }

  auto accept_residual = [&](double r) { return r <= opt.residual_tol * scale; };
  auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };

  std::vector<RootHit> hits;
  auto classify_simple = [&](double x) {
    const double fx = f(x);
    const double d = defect(x);
    if (!accept_residual(std::abs(fx)))
      fail(ErrorCode::SolverDiverged, "refined root fails the residual test at x = " + std::to_string(x));
    // f vanishes quadratically at a double root, so rounding noise can fake
    // a sign change a little way off it. A smallish defect gets polished.
    if (d >= opt.double_tol && d < std::sqrt(opt.double_tol)) {
      const auto p = golden_minimize(defect, x - h, x + h, 1e-15);
      if (p.value < opt.double_tol) {
        hits.push_back({p.x, 2, std::abs(f(p.x)), p.value, false});
        return;
      }
    }
    hits.push_back({x, d < opt.double_tol ? 2 : 1, std::abs(fx), d, false});
  };

  for (std::size_t i = 0; i < cells; ++i) {
    if (sign(fs[i]) * sign(fs[i + 1]) < 0)
      classify_simple(brent_root(f, xs[i], xs[i + 1], fs[i], fs[i + 1]));
  }

  for (std::size_t i = 1; i < cells; ++i) {
    const int s_prev = sign(fs[i - 1]), s_here = sign(fs[i]), s_next = sign(fs[i + 1]);
    if (s_here == 0) {
      if (s_prev * s_next < 0) {
        classify_simple(xs[i]);
        continue;
      }
    } else {
      const bool local_min = std::abs(fs[i]) <= std::abs(fs[i - 1]) && std::abs(fs[i]) <= std::abs(fs[i + 1]);
      if (!local_min || s_prev != s_here || s_next != s_here) continue;
    }

    // Tangential candidate in [x_{i-1}, x_{i+1}].
    const double a = xs[i - 1], b = xs[i + 1];
    const int s = s_here != 0 ? s_here : (s_prev != 0 ? s_prev : s_next);
    if (s != 0) {
      const auto ext = golden_minimize([&](double x) { return double(s) * f(x); }, a, b, 1e-14);
      if (ext.value < 0.0) {
        classify_simple(brent_root(f, a, ext.x, fs[i - 1], f(ext.x)));
        classify_simple(brent_root(f, ext.x, b, f(ext.x), fs[i + 1]));
        continue;
      }
    }
    const auto dmin = golden_minimize(defect, a, b, 1e-15);
    if (dmin.value < opt.double_tol) {
      hits.push_back({dmin.x, 2, std::abs(f(dmin.x)), dmin.value, false});
      continue;
    }
    const auto amin = golden_minimize([&](double x) { return std::abs(f(x)); }, a, b, 1e-15);
    if (accept_residual(amin.value)) hits.push_back({amin.x, 1, amin.value, defect(amin.x), true});
  }

  std::sort(hits.begin(), hits.end(), [](const RootHit& x, const RootHit& y) { return x.x < y.x; });
  std::vector<RootHit> merged;
  for (const auto& hit : hits) {
    if (merged.empty()) {
      merged.push_back(hit);
      continue;
    }
    const double gap = std::abs(hit.x - merged.back().x);
    // Rounding noise can make f flip sign right next to a double root and
    // report it twice; two distinct double roots this close do not occur.
    const bool both_double = hit.multiplicity == 2 && merged.back().multiplicity == 2;
    if (gap < opt.merge_tol || (both_double && gap < 1e-6)) {
      auto& keep = merged.back();
      if (hit.multiplicity > keep.multiplicity ||
          (hit.multiplicity == keep.multiplicity && hit.residual < keep.residual))
        keep = hit;
      continue;
    }
    merged.push_back(hit);
  }
  return merged;
}

}  // namespace starspec
