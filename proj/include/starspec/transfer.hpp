#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"

namespace starspec {

struct TransferMatrix {
  Mat2 entries;
  std::size_t edge = 0;  // 2..N for edge transfers, 1 for the wrap-around map
  double lambda = 0.0;
};

// Matching at the ray of edge j (2 <= j <= N), which sits at omega_{j-1}:
// maps the coefficients of sector j to those of sector j-1.
inline TransferMatrix edge_transfer(const StarGraph& g, std::size_t j, double lambda) {
  if (j < 2 || j > g.n_edges())
    fail(ErrorCode::IndexOutOfRange, "edge transfer index " + std::to_string(j));
  const auto& k = g.constants(j);
  const double tau = g.tau(j);
  const Complex e = unit_phase(g.omega(j - 1) * (2.0 * lambda + 1.0));
  const double s = 1.0 / k.p;
  return {{s * k.m, s * tau * std::conj(e), s * tau * e, s * k.m}, j, lambda};
}

// Edge 1 joins sector N and sector 1 across the cut at omega_0 = -omega_1;
// this maps the sector-1 coefficients to the sector-N ones.
inline TransferMatrix wrap_transfer(const StarGraph& g, double lambda) {
  const auto& k = g.constants(1);
  const double tau = g.tau(1);
  const Complex rot = unit_phase(-kTwoPi * lambda);
  const Complex off = unit_phase(g.omega(1) * (2.0 * lambda + 1.0) - kTwoPi * lambda);
  const double s = 1.0 / k.p;
  return {{s * k.m * rot, s * tau * off, s * tau * std::conj(off), s * k.m * std::conj(rot)}, 1, lambda};
}

// Bound on ||T||: each factor has norm at most (|m| + |tau|)/|p|.
inline double secular_scale(const StarGraph& g) {
  double s = 1.0;
  for (std::size_t j = 1; j <= g.n_edges(); ++j) {
    const auto& k = g.constants(j);
    s *= (std::abs(k.m) + std::abs(g.tau(j))) / std::abs(k.p);
  }
  return std::max(1.0, s);
}

struct Monodromy {
  Mat2 t;
  double lambda = 0.0;
  double secular = 0.0;          // Re tr T - 2
  double identity_defect = 0.0;  // ||T - I||_F
  double imag_trace = 0.0;
};

// T(lambda) = A_2 ... A_N B. Its trace is real and a nonzero kernel of the
// angular operator exists exactly when tr T = 2.
inline Monodromy monodromy(const StarGraph& g, double lambda) {
  Mat2 t = Mat2::identity();
  for (std::size_t j = 2; j <= g.n_edges(); ++j) t = t * edge_transfer(g, j, lambda).entries;
  t = t * wrap_transfer(g, lambda).entries;

  Monodromy out;
  out.t = t;
  out.lambda = lambda;
  const Complex tr = t.trace();
  out.secular = tr.real() - 2.0;
  out.imag_trace = tr.imag();
  out.identity_defect = (t - Mat2::identity()).frobenius();
  if (std::abs(tr.imag()) > 1e-10 * secular_scale(g))
    fail(ErrorCode::NonRealTrace, "Im tr T = " + std::to_string(tr.imag()) + " at lambda = " + std::to_string(lambda));
  return out;
}

inline double secular_function(const StarGraph& g, double lambda) { return monodromy(g, lambda).secular; }

// The full 2N x 2N linear system of matching conditions, written without
// dividing by p_j. Unknown ordering: (c_{1,1}, c_{1,2}, ..., c_{N,1}, c_{N,2}).
// Block row j-1 (j = 2..N) encodes p_j c_{j-1} = M_j c_j at the ray omega_{j-1};
// the last block row encodes edge 1 seen from sector N at omega_N.
inline CMatrix system_matrix(const StarGraph& g, double lambda) {
  const std::size_t n = g.n_edges();
  CMatrix a(2 * n, 2 * n);
  const double mu = 2.0 * lambda + 1.0;

  auto put_block = [&](std::size_t row, std::size_t left, std::size_t right, std::size_t edge, double angle,
                       Complex d1, Complex d2) {
    const auto& k = g.constants(edge);
    const double tau = g.tau(edge);
    const Complex e = unit_phase(angle * mu);
    a(row, 2 * left) = k.p;
    a(row + 1, 2 * left + 1) = k.p;
    a(row, 2 * right) = -k.m * d1;
    a(row, 2 * right + 1) = -tau * std::conj(e) * d2;
    a(row + 1, 2 * right) = -tau * e * d1;
    a(row + 1, 2 * right + 1) = -k.m * d2;
  };

  for (std::size_t j = 2; j <= n; ++j) put_block(2 * (j - 2), j - 2, j - 1, j, g.omega(j - 1), 1.0, 1.0);
  // Sector-1 coefficients continued past the cut pick up e^{-+2 pi i lambda}.
  put_block(2 * (n - 1), n - 1, 0, 1, g.omega(n), unit_phase(-kTwoPi * lambda), unit_phase(kTwoPi * lambda));
  return a;
}

inline Complex secular_det_oracle(const StarGraph& g, double lambda) { return determinant(system_matrix(g, lambda)); }

}  // namespace starspec
