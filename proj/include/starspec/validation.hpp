#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "starspec/bessel.hpp"
#include "starspec/closed_form.hpp"
#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/spectrum.hpp"
#include "starspec/transfer.hpp"
#include "starspec/vertex_unitary.hpp"

namespace starspec {

// Cross-checks of the explicit two- and three-edge formulas against the
// general solver, grouped into named suites.

struct ValidationCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

inline const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names = {"two-edge", "equal", "opposite", "ray", "double", "three",
                                                 "unitary", "bessel"};
  return names;
}

namespace detail {

// Distinct roots of a closed-form secular function on (lo, hi) by the same
// grid-and-refine approach, without a double-root detector. Tangential
// zeros are only pinned down to about sqrt(eps), so anything that close to
// an end of the window is treated as sitting on it.
inline std::vector<double> closed_form_roots(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double end_tol = 1e-7;
  RootSearchOptions opt;
  opt.residual_tol = 1e-9;
  const auto hits = locate_roots(f, [](double) { return 1.0; }, lo, hi, 1.0, opt);
  std::vector<double> out;
  for (const auto& h : hits)
    if (h.x > lo + end_tol && h.x < hi - end_tol) out.push_back(h.x);
  return out;
}

inline std::vector<double> distinct_lambdas(const Spectrum& s) {
  std::vector<double> out;
  for (const auto& r : s.records) out.push_back(r.lambda);
  return out;
}

// Largest distance between two sorted root lists; infinite if the counts
// differ.
inline double root_set_distance(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

class Recorder {
 public:
  Recorder(ValidationReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

  void below(const std::string& name, double metric, double tol) {
    report_.checks.push_back({suite_, name, std::isfinite(metric) && metric <= tol, metric, tol});
  }
  void equal(const std::string& name, double got, double want) {
    report_.checks.push_back({suite_, name, got == want, std::abs(got - want), 0.0});
  }

 private:
  ValidationReport& report_;
  std::string suite_;
};

inline std::vector<double> sample_taus() { return {-4.5, -3.0, -1.2, -0.5, 0.7, 1.5, 2.6, 4.0}; }
inline std::vector<double> sample_omegas() { return {0.3, 0.9, kPi / 2, 2.0, 2.8}; }

}  // namespace detail

// perturbation is added to every closed-form value before comparison; a
// nonzero value must make the run fail. It exists to test the checker.
inline ValidationReport run_validation(const std::string& suite = "all", double perturbation = 0.0) {
  const auto& known = validation_suites();
  if (suite != "all" && std::find(known.begin(), known.end(), suite) == known.end())
    fail(ErrorCode::InvalidInput, "unknown validation suite '" + suite + "'");
  auto wanted = [&](const char* s) { return suite == "all" || suite == s; };
  const double dp = perturbation;
  ValidationReport report;

  if (wanted("two-edge")) {
    detail::Recorder rec(report, "two-edge");
    double worst = 0.0;
    for (double tl : detail::sample_taus())
      for (double tr : {-3.3, -0.8, 1.1, 3.7})
        for (double w : detail::sample_omegas()) {
          const BrokenLineConfig cfg{tl, tr, w};
          auto closed = detail::closed_form_roots([&](double x) { return n2_secular(x, cfg); }, -1.0, 0.0);
          for (auto& x : closed) x += dp;
          const auto solver = detail::distinct_lambdas(find_eigenvalues(to_star_graph(cfg), -0.5, 0.5));
          worst = std::max(worst, detail::root_set_distance(closed, solver));
        }
    rec.below("secular roots match the solver", worst, 1e-8);
  }

  if (wanted("equal") || wanted("opposite")) {
    for (int sgn : {1, -1}) {
      const char* name = sgn == 1 ? "equal" : "opposite";
      if (!wanted(name)) continue;
      detail::Recorder rec(report, name);
      auto secular = [sgn](double x, double t, double w) {
        return sgn == 1 ? n2_equal_secular(x, t, w) : n2_opposite_secular(x, t, w);
      };
      double reflect = 0.0, roots = 0.0, counts = 0.0;
      for (double t : detail::sample_taus())
        for (double w : detail::sample_omegas()) {
          for (double x : {-0.9, -0.7, -0.3, -0.1, 0.4})
            reflect = std::max(reflect, std::abs(secular(-1.0 - x, t, w) - secular(x, t, w)) /
                                            (1.0 + std::abs(secular(x, t, w))));
          auto closed = detail::closed_form_roots([&](double x) { return secular(x, t, w); }, -1.0, 0.0);
          for (auto& x : closed) x += dp;
          const auto g = broken_line_graph(t, sgn * t, w);
          const auto solver = detail::distinct_lambdas(find_eigenvalues(g, -0.5, 0.5));
          roots = std::max(roots, detail::root_set_distance(closed, solver));
          const bool no_roots = sgn == 1 && std::abs(w - kPi / 2) < 1e-12;
          const double expected = no_roots ? 0.0 : 2.0;
          counts = std::max(counts, std::abs(double(solver.size()) + dp - expected));
        }
      rec.below("reflection symmetry about -1/2", reflect, 1e-12);
      rec.below("closed-form roots match the solver", roots, 1e-8);
      rec.below("root count in (-1, 0)", counts, 0.0);
    }
  }

  if (wanted("ray")) {
    detail::Recorder rec(report, "ray");
    double res = 0.0, match = 0.0;
    for (double t : detail::sample_taus()) {
      auto [l1, l2] = n2_ray_roots(t);
      l1 += dp;
      l2 += dp;
      for (double w : detail::sample_omegas()) {
        const BrokenLineConfig cfg{t, 0.0, w};
        res = std::max({res, std::abs(n2_secular(l1, cfg)), std::abs(n2_secular(l2, cfg))});
        const auto solver = detail::distinct_lambdas(find_eigenvalues(to_star_graph(cfg), -0.5, 0.5));
        match = std::max(match, detail::root_set_distance({l1, l2}, solver));
      }
    }
    rec.below("roots solve the secular equation", res, 1e-12);
    rec.below("roots match the solver for every angle", match, 1e-9);
  }

  if (wanted("double")) {
    detail::Recorder rec(report, "double");
    double worst = 0.0;
    int members = 0;
    struct Case {
      double tl, tr;
      DoubleFamily fam;
    };
    const Case cases[] = {{1.3, 1.3, DoubleFamily::Equal},
                          {0.8, -0.8, DoubleFamily::Opposite},
                          {2.5, 1.6, DoubleFamily::ProductPlus4},
                          {2.5, -1.6, DoubleFamily::ProductMinus4}};
    for (const auto& c : cases) {
      for (int k = -2; k <= 2; ++k)
        for (int s = -6; s <= 6; ++s) {
          const auto m = double_family_member(c.fam, k, s);
          if (!m) continue;
          const double w = m->omega.value_or(1.1);
          if (!(w > 1e-6 && w < kPi - 1e-6)) continue;
          const auto g = broken_line_graph(c.tl, c.tr, w);
          worst = std::max(worst, monodromy(g, m->lambda + dp).identity_defect);
          ++members;
        }
    }
    rec.below("family members give T = I", worst, 1e-8);
    rec.below("families are non-empty", members > 0 ? 0.0 : 1.0, 0.0);
    const auto zm = n2_double_eigenvalue_families(1.0, -4.0);
    rec.equal("tau_l tau_r = -4 has a zero mode", zm.has_zero_mode ? 1.0 : 0.0, 1.0);
    rec.equal("generic strengths are simple", n2_double_eigenvalue_families(1.0, 3.0).simple_spectrum() ? 1.0 : 0.0,
              1.0);
  }

  if (wanted("three")) {
    detail::Recorder rec(report, "three");
    double ident = 0.0, roots = 0.0, defic = 0.0;
    const double ws[][2] = {{0.4, 2.5}, {kPi / 3, kPi}, {1.0, 4.0}};
    for (double t1 : {-3.1, 0.6, 4.2})
      for (double t2 : {-1.4, 2.9})
        for (double t3 : {-0.7, 3.5})
          for (const auto& w : ws) {
            const auto g = StarGraph::general({w[0], w[1]}, {t1, t2, t3});
            const double pp = g.constants(1).p * g.constants(2).p * g.constants(3).p;
            for (double x : {-0.9, -0.45, -0.2, 0.3, 1.7}) {
              const double lhs = n3_secular(x, t1, t2, t3, w[0], w[1]);
              const double rhs = -pp * secular_function(g, x) / 2.0;
              ident = std::max(ident, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
            }
          }
    for (double t : {-5.0, -4.0, -3.0, -1.0, -2.0 / std::sqrt(3.0), 0.5, 1.0, 2.0 / std::sqrt(3.0), 3.0, 3.9, 4.0,
                     6.0}) {
      std::vector<double> closed;
      for (const auto& v : n3_symmetric_roots(t))
        if (v.in_unit_interval) closed.push_back(v.lambda + dp);
      const auto g = StarGraph::symmetric(3, {t, t, t});
      const auto d = deficiency_indices(g);
      roots = std::max(roots, detail::root_set_distance(closed, detail::distinct_lambdas(d.spectrum)));
      defic = std::max(defic, std::abs(double(n3_symmetric_deficiency(t).first) + dp - d.n_plus));
    }
    rec.below("closed form equals -p1 p2 p3 (tr T - 2) / 2", ident, 1e-10);
    rec.below("symmetric root families match the solver", roots, 1e-8);
    rec.below("symmetric deficiency formula", defic, 0.0);
  }

  if (wanted("unitary")) {
    detail::Recorder rec(report, "unitary");
    double defect = 0.0, count = 0.0;
    for (std::size_t n : {2u, 3u, 4u, 6u})
      for (double a : {-3.0, 0.5, 2.7}) {
        std::vector<double> taus(n);
        for (std::size_t j = 0; j < n; ++j) taus[j] = (j % 2 == 0) ? a : 1.0 - 0.3 * double(j);
        const auto g = StarGraph::symmetric(n, taus);
        defect = std::max(defect, build_vertex_unitary(g).unitarity_defect);
        count = std::max(count, std::abs(double(arc_count(g)) + dp - double(deficiency_indices(g).count_in_window)));
      }
    rec.below("vertex matrix is unitary", defect, 1e-10);
    rec.below("arc count equals solver count", count, 0.0);
  }

  if (wanted("bessel")) {
    detail::Recorder rec(report, "bessel");
    double half = 0.0, seam = 0.0;
    for (double x : {1e-3, 0.05, 0.7, 1.9, 2.0, 3.3, 12.0, 30.0}) {
      const double k12 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
      const double k32 = k12 * (1.0 + 1.0 / x);
      half = std::max({half, std::abs(bessel_k(0.5, x) + dp - k12) / k12, std::abs(bessel_k(1.5, x) - k32) / k32});
    }
    for (double nu : {0.0, 0.2, 0.5, 0.8, 1.0, 1.3, 1.5}) {
      const double a = bessel_k_series(nu, kBesselSeam).value, b = bessel_k_integral(nu, kBesselSeam).value;
      seam = std::max(seam, std::abs(a - b) / b);
    }
    rec.below("half-integer closed forms", half, 1e-10);
    rec.below("branch seam continuity", seam, 1e-12);
  }

  return report;
}

}  // namespace starspec
