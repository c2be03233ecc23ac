#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"
#include "starspec/roots.hpp"
#include "starspec/spectrum.hpp"

namespace starspec {

struct VertexUnitary {
  CMatrix u;
  double unitarity_defect = 0.0;  // ||U U* - I||_F
};

// The 2N x 2N matrix relating incoming and outgoing boundary values at the
// vertex. Built entry by entry; rows and columns use 1-based indices taken
// modulo 2N.
inline VertexUnitary build_vertex_unitary(const StarGraph& g) {
  const std::size_t n = g.n_edges();
  const long dim = long(2 * n);
  CMatrix u(2 * n, 2 * n);
  auto idx = [dim](long k) { return std::size_t(((k - 1) % dim + dim) % dim); };

  for (std::size_t j = 1; j <= n; ++j) {
    const auto& k = g.constants(j);
    const double tau = g.tau(j);
    const Complex e = unit_phase(g.omega(j - 1));
    const long jj = long(j);
    u(idx(2 * jj - 2), idx(2 * jj - 3)) = e * tau / k.m;
    u(idx(2 * jj - 2), idx(2 * jj)) = k.p / k.m;
    u(idx(2 * jj - 1), idx(2 * jj - 3)) = k.p / k.m;
    u(idx(2 * jj - 1), idx(2 * jj)) = -std::conj(e) * tau / k.m;
  }

  VertexUnitary out{u, unitarity_defect(u)};
  if (out.unitarity_defect > 1e-10)
    fail(ErrorCode::NotUnitary, "vertex matrix defect " + std::to_string(out.unitarity_defect));
  return out;
}

// Broken line with electrostatic (eta) and Lorentz-scalar (tau) strengths.
// This matrix is not unitary unless both eta vanish; the caller gets the
// defect rather than an error.
struct ElectrostaticParams {
  double tau_l = 0.0, tau_r = 0.0, eta_l = 0.0, eta_r = 0.0, omega = kPi / 2;
};

inline VertexUnitary electrostatic_vertex_n2(const ElectrostaticParams& q) {
  if (!(q.omega > 0.0 && q.omega < kPi)) fail(ErrorCode::AngleOrdering, "broken-line angle must lie in (0, pi)");
  const double eps_l = q.eta_l * q.eta_l - q.tau_l * q.tau_l;
  const double eps_r = q.eta_r * q.eta_r - q.tau_r * q.tau_r;
  for (double eps : {eps_l, eps_r}) {
    if (std::abs(eps + 4.0) <= kConfinementTol) fail(ErrorCode::Confinement, "eta^2 - tau^2 = -4");
    if (std::abs(eps - 4.0) <= kConfinementTol) fail(ErrorCode::DomainError, "eta^2 - tau^2 = 4 makes m vanish");
  }
  const double pl = 1.0 + eps_l / 4.0, ml = 1.0 - eps_l / 4.0;
  const double pr = 1.0 + eps_r / 4.0, mr = 1.0 - eps_r / 4.0;
  const Complex e = unit_phase(q.omega);

  CMatrix u(4, 4);
  u(0, 1) = -e * (q.eta_r - q.tau_r) / mr;
  u(0, 2) = pr / mr;
  u(1, 0) = -e * (q.eta_l + q.tau_l) / ml;
  u(1, 3) = pl / ml;
  u(2, 0) = pl / ml;
  u(2, 3) = -std::conj(e) * (q.eta_l - q.tau_l) / ml;
  u(3, 1) = pr / mr;
  u(3, 2) = -std::conj(e) * (q.eta_r + q.tau_r) / mr;
  return {u, unitarity_defect(u)};
}

struct EigenphaseRecord {
  double theta = 0.0;  // in [0, 2 pi)
  int multiplicity = 1;
  bool on_arc = false;  // theta in (0, 2 pi / N)
  bool arc_boundary = false;
};

struct EigenphaseOptions {
  double points_per_dim = 8192.0;
  double rank_tol = 1e-7;
  double merge_tol = 1e-9;
  double arc_boundary_tol = 1e-9;
  int max_refinements = 2;
};

namespace detail {

inline CMatrix shifted(const CMatrix& u, Complex z) {
  CMatrix a = u;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= z;
  return a;
}

inline double cyclic_distance(double a, double b) {
  const double d = std::abs(std::remainder(a - b, kTwoPi));
  return d;
}

}  // namespace detail

// Eigenphases of a unitary matrix, with multiplicities summing to its size.
// log|det(U - e^{i theta})| is concave between consecutive eigenphases, so
// each eigenphase (or cluster) produces one discrete local minimum on a fine
// enough grid; each minimum is then refined on the smallest singular value,
// whose zero is V-shaped.
inline std::vector<EigenphaseRecord> eigenphases(const CMatrix& u, std::size_t n_edges,
                                                 const EigenphaseOptions& opt = {}) {
  const std::size_t dim = u.rows();
  if (dim != u.cols()) fail(ErrorCode::DimensionMismatch, "eigenphases of a non-square matrix");
  const double arc = kTwoPi / double(n_edges);

  auto sigma_min = [&](double th) { return jacobi_svd(detail::shifted(u, unit_phase(th))).sigma.front(); };

  std::size_t points = std::size_t(opt.points_per_dim * double(dim));
  for (int attempt = 0; attempt <= opt.max_refinements; ++attempt, points *= 8) {
    const double h = kTwoPi / double(points);
    std::vector<double> logdet(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double a = std::abs(determinant(detail::shifted(u, unit_phase(double(i) * h))));
      logdet[i] = a > 0.0 ? std::log(a) : -1e300;
    }

    std::vector<double> candidates;
    for (std::size_t i = 0; i < points; ++i) {
      const double prev = logdet[(i + points - 1) % points], next = logdet[(i + 1) % points];
      if (logdet[i] <= prev && logdet[i] < next) {
        const double th = double(i) * h;
        candidates.push_back(golden_minimize(sigma_min, th - h, th + h, 1e-15).x);
      }
    }

    std::vector<EigenphaseRecord> out;
    for (double th : candidates) {
      th = std::fmod(th, kTwoPi);
      if (th < 0) th += kTwoPi;
      bool dup = false;
      for (const auto& r : out)
        if (detail::cyclic_distance(r.theta, th) < opt.merge_tol) dup = true;
      if (dup) continue;
      const auto s = jacobi_svd(detail::shifted(u, unit_phase(th))).sigma;
      const int mult = int(std::count_if(s.begin(), s.end(), [&](double v) { return v < opt.rank_tol; }));
      if (mult == 0) continue;
      EigenphaseRecord r;
      r.theta = th;
      r.multiplicity = mult;
      r.arc_boundary = detail::cyclic_distance(th, 0.0) <= opt.arc_boundary_tol ||
                       std::abs(th - arc) <= opt.arc_boundary_tol;
      r.on_arc = !r.arc_boundary && th > 0.0 && th < arc;
      out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });

    int total = 0;
    for (const auto& r : out) total += r.multiplicity;
    if (total == int(dim)) return out;
  }
  fail(ErrorCode::PhaseResolution, "eigenphase multiplicities do not add up to the matrix size");
}

inline std::vector<EigenphaseRecord> eigenphases(const VertexUnitary& v, std::size_t n_edges,
                                                 const EigenphaseOptions& opt = {}) {
  return eigenphases(v.u, n_edges, opt);
}

inline void require_symmetric(const StarGraph& g) {
  if (!g.is_symmetric()) fail(ErrorCode::NotSymmetric, "the arc method needs equally spaced edges");
}

// Number of eigenvalues (with multiplicity) of J_N in (-1/2, 1/2): those
// eigenphases of U_N that fall on the open arc (0, 2 pi / N). Symmetric
// graphs only.
inline int arc_count(const StarGraph& g, const EigenphaseOptions& opt = {}) {
  require_symmetric(g);
  int c = 0;
  for (const auto& r : eigenphases(build_vertex_unitary(g), g.n_edges(), opt))
    if (r.on_arc) c += r.multiplicity;
  return c;
}

// Spectrum of J_N in (lo, hi) obtained from the eigenphases alone:
// lambda = -N theta / (2 pi) - N k for integer k.
inline Spectrum spectrum_via_arc(const StarGraph& g, double lo, double hi, const EigenphaseOptions& opt = {},
                                 double boundary_tol = 1e-9) {
  require_symmetric(g);
  detail::check_window(lo, hi);
  const double n = double(g.n_edges());
  Spectrum out;
  out.lo = lo;
  out.hi = hi;
  for (const auto& r : eigenphases(build_vertex_unitary(g), g.n_edges(), opt)) {
    const double base = -n * r.theta / kTwoPi + 0.5;  // lambda_tilde at k = 0
    const long k_lo = long(std::floor((base - hi) / n)) - 1;
    const long k_hi = long(std::ceil((base - lo) / n)) + 1;
    for (long k = k_lo; k <= k_hi; ++k) {
      EigenRecord e;
      e.lambda_tilde = base - n * double(k);
      e.lambda = e.lambda_tilde - 0.5;
      e.multiplicity = r.multiplicity;
      if (std::abs(e.lambda_tilde - lo) <= boundary_tol || std::abs(e.lambda_tilde - hi) <= boundary_tol)
        out.boundary.push_back(e);
      else if (e.lambda_tilde > lo && e.lambda_tilde < hi)
        out.records.push_back(e);
    }
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const auto& a, const auto& b) { return a.lambda_tilde < b.lambda_tilde; });
  return out;
}

}  // namespace starspec
