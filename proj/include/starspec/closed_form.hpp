#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"

namespace starspec {

// Explicit secular equations and root formulas for two and three edges.
// They are deliberately written out term by term rather than via the
// transfer matrices so they can serve as independent checks.

struct BrokenLineConfig {
  double tau_l = 0.0;
  double tau_r = 0.0;
  double omega = kPi / 2;
};

inline void validate(const BrokenLineConfig& c) {
  derive_edge_constants(c.tau_l);
  derive_edge_constants(c.tau_r);
  if (!(c.omega > 0.0 && c.omega < kPi)) fail(ErrorCode::AngleOrdering, "broken-line angle must lie in (0, pi)");
}

inline StarGraph to_star_graph(const BrokenLineConfig& c) { return broken_line_graph(c.tau_l, c.tau_r, c.omega); }

inline double n2_secular(double lambda, const BrokenLineConfig& c) {
  const auto l = derive_edge_constants(c.tau_l);
  const auto r = derive_edge_constants(c.tau_r);
  const double pp = l.p * r.p;
  return 1.0 - l.m * r.m * std::cos(kTwoPi * lambda) / pp -
         c.tau_l * c.tau_r * std::cos(2.0 * c.omega * (2.0 * lambda + 1.0) - kTwoPi * lambda) / pp;
}

// tau_l = tau_r = tau, cleared of denominators.
inline double n2_equal_secular(double lambda, double tau, double omega) {
  const double t2 = tau * tau;
  return (4.0 - t2) * (4.0 - t2) - (4.0 + t2) * (4.0 + t2) * std::cos(kTwoPi * lambda) -
         16.0 * t2 * std::cos(kTwoPi * lambda - 4.0 * omega * lambda - 2.0 * omega);
}

// tau_l = -tau_r = tau.
inline double n2_opposite_secular(double lambda, double tau, double omega) {
  const double t2 = tau * tau;
  return (4.0 - t2) * (4.0 - t2) - (4.0 + t2) * (4.0 + t2) * std::cos(kTwoPi * lambda) +
         16.0 * t2 * std::cos(kTwoPi * lambda - 4.0 * omega * lambda - 2.0 * omega);
}

// Interaction on a single ray (tau_r = 0): both roots in (-1, 0), the first
// in (-1, -1/2) and the second in (-1/2, 0). Independent of the angle.
inline std::pair<double, double> n2_ray_roots(double tau_l) {
  derive_edge_constants(tau_l);
  if (tau_l == 0.0) fail(ErrorCode::ZeroStrength, "tau_l = 0 is the free operator");
  const double t2 = tau_l * tau_l;
  const double a = std::acos((4.0 - t2) / (4.0 + t2)) / kTwoPi;
  return {-1.0 + a, -a};
}

enum class DoubleFamily { Equal, Opposite, ProductPlus4, ProductMinus4 };

inline const char* family_name(DoubleFamily f) {
  switch (f) {
    case DoubleFamily::Equal: return "equal";
    case DoubleFamily::Opposite: return "opposite";
    case DoubleFamily::ProductPlus4: return "product+4";
    case DoubleFamily::ProductMinus4: return "product-4";
  }
  return "?";
}

struct DoubleEigenvalueFamilies {
  std::vector<DoubleFamily> families;  // empty: the spectrum is simple
  bool has_zero_mode = false;          // tau_l * tau_r = -4

  bool simple_spectrum() const { return families.empty(); }
};

inline DoubleEigenvalueFamilies n2_double_eigenvalue_families(double tau_l, double tau_r, double tol = 1e-12) {
  DoubleEigenvalueFamilies out;
  if (std::abs(tau_l - tau_r) <= tol) out.families.push_back(DoubleFamily::Equal);
  if (std::abs(tau_l + tau_r) <= tol) out.families.push_back(DoubleFamily::Opposite);
  if (std::abs(tau_l * tau_r - 4.0) <= tol) out.families.push_back(DoubleFamily::ProductPlus4);
  if (std::abs(tau_l * tau_r + 4.0) <= tol) {
    out.families.push_back(DoubleFamily::ProductMinus4);
    out.has_zero_mode = true;
  }
  return out;
}

// The (lambda, omega) pair of a family member for integers k, s. The
// product -4 family at k = -1 is double for every omega; omega is then
// left empty. Returns nullopt where the family has no member (product +4
// at k = -1).
struct FamilyMember {
  double lambda;
  std::optional<double> omega;
};

inline std::optional<FamilyMember> double_family_member(DoubleFamily f, int k, int s) {
  const double kk = k, ss = s;
  switch (f) {
    case DoubleFamily::Equal:
      return FamilyMember{kk, kPi * (2 * kk + 2 * ss + 1) / (2 * (2 * kk + 1))};
    case DoubleFamily::Opposite:
      return FamilyMember{kk, kPi * ss / (2 * kk + 1)};
    case DoubleFamily::ProductPlus4:
      if (k == -1) return std::nullopt;
      return FamilyMember{kk + 0.5, (kPi + 2 * kPi * ss) / (4 * kk + 4)};
    case DoubleFamily::ProductMinus4:
      if (k == -1) return FamilyMember{-0.5, std::nullopt};
      return FamilyMember{kk + 0.5, kPi * ss / (2 * (kk + 1))};
  }
  return std::nullopt;
}

inline double n3_secular(double lambda, double tau1, double tau2, double tau3, double omega, double omega2) {
  const auto c1 = derive_edge_constants(tau1);
  const auto c2 = derive_edge_constants(tau2);
  const auto c3 = derive_edge_constants(tau3);
  const double mu = 2.0 * lambda + 1.0;
  const double tp = kTwoPi * lambda;
  return c1.p * c2.p * c3.p - c1.m * c2.m * c3.m * std::cos(tp) -
         c1.m * tau2 * tau3 * std::cos((omega2 - omega) * mu - tp) -
         c2.m * tau1 * tau3 * std::cos(-(omega + omega2) * mu + tp) -
         c3.m * tau1 * tau2 * std::cos(2.0 * omega * mu - tp);
}

// Equal strengths on the equally spaced three-edge star, written as
// left-hand side minus right-hand side.
inline double n3_symmetric_secular(double lambda, double tau) {
  const double t2 = tau * tau;
  const double a = 4.0 + t2, b = 4.0 - t2;
  return a * a * a * std::cos(kTwoPi * lambda) - b * b * b - 48.0 * a * t2 * std::cos(kPi / 3.0 * (2.0 * lambda + 1.0));
}

struct RootFamilyValue {
  int family = 0;  // 1..4
  int k = 0;
  double lambda = 0.0;
  bool in_unit_interval = false;  // lambda in (-1, 0)
  double residual = 0.0;          // |symmetric secular| / its scale
  bool verified = false;
};

inline std::vector<RootFamilyValue> n3_symmetric_roots(double tau, const std::vector<int>& ks = {-1, 0, 1},
                                                       double verify_tol = 1e-10) {
  derive_edge_constants(tau);
  const double s3 = std::sqrt(3.0);
  const double t2 = tau * tau;
  const double c = 3.0 / kPi;

  double base[4];
  if (std::abs(std::abs(tau) - 2.0 / s3) <= 1e-12) {
    const double s5 = std::sqrt(5.0);
    base[0] = 0.5;
    base[1] = 1.5;
    base[2] = -c * std::atan((2.0 + s5) / s3);
    base[3] = c * std::atan((s5 - 2.0) / s3);
  } else {
    const double root = s3 * std::sqrt(48.0 + 40.0 * t2 + 3.0 * t2 * t2);
    base[0] = c * std::atan((6.0 - s3 * tau) / (3.0 * tau + 2.0 * s3));
    base[1] = c * std::atan((6.0 + s3 * tau) / (2.0 * s3 - 3.0 * tau));
    base[2] = -c * std::atan((12.0 + 3.0 * t2 + root) / (8.0 * s3));
    base[3] = c * std::atan((-12.0 - 3.0 * t2 + root) / (8.0 * s3));
  }

  const double a = 4.0 + t2, b = 4.0 - t2;
  const double scale = a * a * a + std::abs(b * b * b) + 48.0 * a * t2;
  std::vector<RootFamilyValue> out;
  for (int f = 0; f < 4; ++f)
    for (int k : ks) {
      RootFamilyValue v;
      v.family = f + 1;
      v.k = k;
      v.lambda = 3.0 * k + base[f];
      v.in_unit_interval = v.lambda > -1.0 && v.lambda < 0.0;
      v.residual = std::abs(n3_symmetric_secular(v.lambda, tau)) / scale;
      v.verified = v.residual <= verify_tol;
      out.push_back(v);
    }
  return out;
}

inline std::pair<int, int> n3_symmetric_deficiency(double tau) {
  derive_edge_constants(tau);
  const int n = std::abs(tau) > 2.0 * std::sqrt(3.0) ? 1 : 0;
  return {n, n};
}

}  // namespace starspec
