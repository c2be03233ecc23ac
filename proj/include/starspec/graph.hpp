#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "starspec/errors.hpp"
#include "starspec/linalg.hpp"

namespace starspec {

// |tau| this close to 2 counts as the confinement case, where the edge
// decouples and the matching conditions degenerate.
inline constexpr double kConfinementTol = 1e-12;
inline constexpr double kSymmetryTol = 1e-12;

struct EdgeConstants {
  double epsilon;  // -tau^2
  double p;        // 1 - tau^2/4
  double m;        // 1 + tau^2/4
};

inline EdgeConstants derive_edge_constants(double tau) {
  if (!std::isfinite(tau)) fail(ErrorCode::InvalidInput, "interaction strength must be finite");
  if (std::abs(std::abs(tau) - 2.0) <= kConfinementTol)
    fail(ErrorCode::Confinement, "|tau| = 2 is the confinement case (tau = " + std::to_string(tau) + ")");
  const double q = 0.25 * tau * tau;
  return {-tau * tau, 1.0 - q, 1.0 + q};
}

// Raw, unvalidated description: omegas are the interior ray angles
// omega_1 < ... < omega_{N-1}, taus the strengths on edges 1..N.
struct GraphSpec {
  std::vector<double> omegas;
  std::vector<double> taus;
};

class StarGraph {
 public:
  static StarGraph general(std::vector<double> omegas, std::vector<double> taus);
  static StarGraph symmetric(std::size_t n, std::vector<double> taus);

  std::size_t n_edges() const { return taus_.size(); }

  // Interior angles omega_1..omega_{N-1}.
  std::span<const double> omegas() const { return omegas_; }
  std::span<const double> taus() const { return taus_; }

  // Extended angle sequence, j = 0..N, with omega_0 = -omega_1 and
  // omega_N = 2*pi - omega_1.
  double omega(std::size_t j) const {
    const std::size_t n = n_edges();
    if (j > n) fail(ErrorCode::IndexOutOfRange, "angle index " + std::to_string(j));
    if (j == 0) return -omegas_[0];
    if (j == n) return kTwoPi - omegas_[0];
    return omegas_[j - 1];
  }

  // Edge quantities use the 1-based edge numbering j = 1..N.
  double tau(std::size_t j) const {
    check_edge(j);
    return taus_[j - 1];
  }
  const EdgeConstants& constants(std::size_t j) const {
    check_edge(j);
    return constants_[j - 1];
  }
  // Sector I_j = (omega_{j-1}, omega_j).
  double sector_width(std::size_t j) const {
    check_edge(j);
    return omega(j) - omega(j - 1);
  }

  bool is_symmetric() const {
    const std::size_t n = n_edges();
    for (std::size_t j = 1; j <= n; ++j)
      if (std::abs(omega(j) - (2.0 * double(j) - 1.0) * kPi / double(n)) > kSymmetryTol) return false;
    return true;
  }

  // Same angles, new strengths.
  StarGraph with_taus(std::vector<double> taus) const { return general(omegas_, std::move(taus)); }

  GraphSpec spec() const { return {omegas_, taus_}; }

 private:
  friend StarGraph validate(const GraphSpec& raw);
  StarGraph() = default;

  void check_edge(std::size_t j) const {
    if (j < 1 || j > n_edges()) fail(ErrorCode::IndexOutOfRange, "edge index " + std::to_string(j));
  }

  std::vector<double> omegas_;
  std::vector<double> taus_;
  std::vector<EdgeConstants> constants_;
};

inline StarGraph validate(const GraphSpec& raw) {
  const std::size_t n = raw.taus.size();
  if (n < 2) fail(ErrorCode::InvalidInput, "a star graph needs at least 2 edges");
  if (raw.omegas.size() != n - 1)
    fail(ErrorCode::InvalidInput, "expected " + std::to_string(n - 1) + " angles for " + std::to_string(n) +
                                      " edges, got " + std::to_string(raw.omegas.size()));
  for (double w : raw.omegas)
    if (!std::isfinite(w)) fail(ErrorCode::InvalidInput, "angles must be finite");

  const double w1 = raw.omegas.front();
  if (!(w1 > 0.0)) fail(ErrorCode::AngleOrdering, "omega_1 must be positive");
  for (std::size_t j = 1; j < raw.omegas.size(); ++j)
    if (!(raw.omegas[j] > raw.omegas[j - 1]))
      fail(ErrorCode::AngleOrdering, "angles must be strictly increasing (omega_" + std::to_string(j) +
                                         " >= omega_" + std::to_string(j + 1) + ")");
  if (!(raw.omegas.back() < kTwoPi - w1))
    fail(ErrorCode::AngleOrdering, "omega_{N-1} must be smaller than 2*pi - omega_1");

  StarGraph g;
  g.omegas_ = raw.omegas;
  g.taus_ = raw.taus;
  g.constants_.reserve(n);
  for (double t : raw.taus) g.constants_.push_back(derive_edge_constants(t));
  return g;
}

inline StarGraph StarGraph::general(std::vector<double> omegas, std::vector<double> taus) {
  return validate(GraphSpec{std::move(omegas), std::move(taus)});
}

inline StarGraph StarGraph::symmetric(std::size_t n, std::vector<double> taus) {
  if (n < 2) fail(ErrorCode::InvalidInput, "a star graph needs at least 2 edges");
  if (taus.size() != n)
    fail(ErrorCode::InvalidInput,
         "expected " + std::to_string(n) + " strengths, got " + std::to_string(taus.size()));
  std::vector<double> omegas(n - 1);
  for (std::size_t j = 1; j < n; ++j) omegas[j - 1] = (2.0 * double(j) - 1.0) * kPi / double(n);
  return general(std::move(omegas), std::move(taus));
}

inline StarGraph symmetric_graph(std::size_t n, std::vector<double> taus) {
  return StarGraph::symmetric(n, std::move(taus));
}

// Broken line with strengths tau_l, tau_r on the two rays and opening angle
// omega mapped to the two-edge star graph. The map is (tau_1, tau_2) =
// (-tau_r, -tau_l); applying it twice gives back the input.
inline std::pair<double, double> convention_map(double tau_l, double tau_r) { return {-tau_r, -tau_l}; }

inline StarGraph broken_line_graph(double tau_l, double tau_r, double omega) {
  if (!(omega > 0.0 && omega < kPi)) fail(ErrorCode::AngleOrdering, "broken-line angle must lie in (0, pi)");
  const auto [t1, t2] = convention_map(tau_l, tau_r);
  return StarGraph::general({omega}, {t1, t2});
}

}  // namespace starspec
