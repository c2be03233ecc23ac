#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"
#include "starspec/roots.hpp"
#include "starspec/transfer.hpp"

namespace starspec {

struct SolverOptions {
  double grid_per_unit = 8192.0;
  double residual_tol = 1e-9;
  double multiplicity_tol = 1e-8;
  double boundary_tol = 1e-9;
  double merge_tol = 1e-9;

  RootSearchOptions root_options() const {
    RootSearchOptions r;
    r.cells_per_unit = grid_per_unit;
    r.residual_tol = residual_tol;
    r.double_tol = multiplicity_tol;
    r.merge_tol = merge_tol;
    return r;
  }
};

// An eigenvalue lambda_tilde = lambda + 1/2 of the angular operator J_N.
struct EigenRecord {
  double lambda_tilde = 0.0;
  double lambda = 0.0;
  int multiplicity = 1;
  double residual = 0.0;         // |Re tr T - 2| (or |det| for the determinant route)
  double identity_defect = 0.0;  // ||T - I||_F (or the second-smallest singular value)
  bool parabolic = false;        // tangential simple root, accepted on residual alone
};

struct Spectrum {
  double lo = 0.0, hi = 0.0;  // open window in lambda_tilde
  std::vector<EigenRecord> records;
  // Roots within the boundary tolerance of lo or hi; never counted.
  std::vector<EigenRecord> boundary;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& r : records) s += r.multiplicity;
    return s;
  }
  bool has_boundary_eigenvalue() const { return !boundary.empty(); }
};

namespace detail {

inline void check_window(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    fail(ErrorCode::InvalidInput, "spectral window must satisfy lo < hi");
}

inline Spectrum collect(const std::vector<RootHit>& hits, double lo, double hi, double boundary_tol) {
  Spectrum out;
  out.lo = lo;
  out.hi = hi;
  for (const auto& h : hits) {
    EigenRecord r;
    r.lambda = h.x;
    r.lambda_tilde = h.x + 0.5;
    r.multiplicity = h.multiplicity;
    r.residual = h.residual;
    r.identity_defect = h.defect;
    r.parabolic = h.parabolic;
    if (std::abs(r.lambda_tilde - lo) <= boundary_tol || std::abs(r.lambda_tilde - hi) <= boundary_tol)
      out.boundary.push_back(r);
    else if (r.lambda_tilde > lo && r.lambda_tilde < hi)
      out.records.push_back(r);
  }
  return out;
}

}  // namespace detail

// Eigenvalues of J_N in the open window (lo, hi) of lambda_tilde, located as
// zeros of Re tr T(lambda) - 2. Multiplicity 2 exactly when T = I.
inline Spectrum find_eigenvalues(const StarGraph& g, double lo, double hi, const SolverOptions& opt = {}) {
  detail::check_window(lo, hi);
  const auto hits = locate_roots([&](double x) { return monodromy(g, x).secular; },
                                 [&](double x) { return monodromy(g, x).identity_defect; }, lo - 0.5, hi - 0.5,
                                 secular_scale(g), opt.root_options());
  return detail::collect(hits, lo, hi, opt.boundary_tol);
}

// Independent route through the full 2N x 2N matching system: zeros of
// det M(lambda), multiplicity read off as the nullity of M.
inline Spectrum find_eigenvalues_det_route(const StarGraph& g, double lo, double hi, const SolverOptions& opt = {}) {
  detail::check_window(lo, hi);

  // Hadamard bound on |det M|, used to scale the residual test.
  const CMatrix probe = system_matrix(g, 0.0);
  double scale = 1.0;
  for (std::size_t i = 0; i < probe.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < probe.cols(); ++j) row += std::norm(probe(i, j));
    scale *= std::sqrt(row);
  }

  auto second_singular = [&](double x) {
    const auto s = singular_values(system_matrix(g, x));
    return s[1] / s.back();
  };
  const auto hits = locate_roots([&](double x) { return secular_det_oracle(g, x).real(); }, second_singular,
                                 lo - 0.5, hi - 0.5, std::max(1.0, scale), opt.root_options());
  return detail::collect(hits, lo, hi, opt.boundary_tol);
}

struct DeficiencyIndices {
  int n_plus = 0;
  int n_minus = 0;
  int count_in_window = 0;  // eigenvalues in (-1/2, 1/2), with multiplicity
  bool boundary_eigenvalue = false;
  Spectrum spectrum;
};

// n_+ = n_- = half the number of eigenvalues of J_N in (-1/2, 1/2).
inline DeficiencyIndices deficiency_indices(const StarGraph& g, const SolverOptions& opt = {}) {
  DeficiencyIndices d;
  d.spectrum = find_eigenvalues(g, -0.5, 0.5, opt);
  d.count_in_window = d.spectrum.total_multiplicity();
  d.boundary_eigenvalue = d.spectrum.has_boundary_eigenvalue();
  if (d.count_in_window % 2 != 0)
    fail(ErrorCode::OddCount, "odd eigenvalue count " + std::to_string(d.count_in_window) + " in (-1/2, 1/2)");
  if (d.count_in_window > 2 * int(g.n_edges()))
    fail(ErrorCode::BoundViolation, "eigenvalue count " + std::to_string(d.count_in_window) + " exceeds 2N");
  d.n_plus = d.n_minus = d.count_in_window / 2;
  return d;
}

// Zero is an eigenvalue of J_N iff T(-1/2) = I; it is then double.
inline bool has_zero_mode(const StarGraph& g, const SolverOptions& opt = {}) {
  return monodromy(g, -0.5).identity_defect < opt.multiplicity_tol;
}

// Sweeps: one tau or a tied group of taus (0-based edge positions) takes
// each value in turn; everything else stays fixed.
struct ParamPath {
  std::vector<std::size_t> edges;
};

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  int n_plus = 0;
  std::vector<EigenRecord> eigenvalues;  // in (-1/2, 1/2)
};

struct IndexTransition {
  double from_value, to_value;
  int n_before, n_after;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<IndexTransition> transitions;
};

inline SweepResult sweep(const StarGraph& base, const ParamPath& path, const std::vector<double>& values,
                         const SolverOptions& opt = {}) {
  if (path.edges.empty()) fail(ErrorCode::InvalidInput, "sweep parameter path is empty");
  for (auto e : path.edges)
    if (e >= base.n_edges()) fail(ErrorCode::IndexOutOfRange, "sweep edge " + std::to_string(e + 1));

  SweepResult out;
  std::optional<std::size_t> last_ok;
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      std::vector<double> taus(base.taus().begin(), base.taus().end());
      for (auto e : path.edges) taus[e] = v;
      const auto d = deficiency_indices(base.with_taus(std::move(taus)), opt);
      row.ok = true;
      row.n_plus = d.n_plus;
      row.eigenvalues = d.spectrum.records;
    } catch (const Error& err) {
      row.error = err.what();
    }
    out.rows.push_back(std::move(row));
    const SweepRow& cur = out.rows.back();
    if (!cur.ok) continue;
    if (last_ok) {
      const SweepRow& prev = out.rows[*last_ok];
      if (prev.n_plus != cur.n_plus) out.transitions.push_back({prev.value, cur.value, prev.n_plus, cur.n_plus});
    }
    last_ok = out.rows.size() - 1;
  }
  return out;
}

}  // namespace starspec
