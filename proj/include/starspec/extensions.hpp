#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "starspec/bessel.hpp"
#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"
#include "starspec/spectrum.hpp"
#include "starspec/transfer.hpp"

namespace starspec {

inline constexpr double kMatchingTol = 1e-8;

// phi(theta) = (c_{j,1} e^{i lambda theta}, c_{j,2} e^{-i lambda theta}) on
// the sector I_j. The sectors are stored so evaluation needs no graph.
struct AngularEigenfunction {
  double lambda = 0.0;
  std::vector<Vec2> coefficients;  // j = 1..N stored at 0..N-1
  std::vector<double> sector_start;  // omega_{j-1}
  std::vector<double> sector_width;

  double lambda_tilde() const { return lambda + 0.5; }

  // Closed-form L^2(S^1) norm: both components have constant modulus on
  // each sector.
  double norm() const {
    double s = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j)
      s += sector_width[j] * (std::norm(coefficients[j][0]) + std::norm(coefficients[j][1]));
    return std::sqrt(s);
  }

  Vec2 operator()(double theta) const {
    const double start = sector_start.front();
    double t = std::fmod(theta - start, kTwoPi);
    if (t < 0) t += kTwoPi;
    t += start;
    std::size_t j = 0;
    while (j + 1 < coefficients.size() && t >= sector_start[j] + sector_width[j]) ++j;
    return {coefficients[j][0] * unit_phase(lambda * t), coefficients[j][1] * unit_phase(-lambda * t)};
  }
};

inline Complex l2_inner(const AngularEigenfunction& a, const AngularEigenfunction& b) {
  if (a.coefficients.size() != b.coefficients.size())
    fail(ErrorCode::DimensionMismatch, "eigenfunctions on different graphs");
  Complex s{};
  for (std::size_t j = 0; j < a.coefficients.size(); ++j)
    s += a.sector_width[j] *
         (std::conj(a.coefficients[j][0]) * b.coefficients[j][0] + std::conj(a.coefficients[j][1]) * b.coefficients[j][1]);
  return s;
}

namespace detail {

inline Mat2 inverse_unimodular(const Mat2& m) { return {m.d, -m.b, -m.c, m.a}; }

inline double vec_norm(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

inline Vec2 vec_sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

inline AngularEigenfunction scaled(AngularEigenfunction phi, Complex s) {
  for (auto& c : phi.coefficients) {
    c[0] *= s;
    c[1] *= s;
  }
  return phi;
}

inline AngularEigenfunction combine(const AngularEigenfunction& a, Complex ca, const AngularEigenfunction& b,
                                    Complex cb) {
  AngularEigenfunction out = a;
  for (std::size_t j = 0; j < out.coefficients.size(); ++j) {
    out.coefficients[j][0] = ca * a.coefficients[j][0] + cb * b.coefficients[j][0];
    out.coefficients[j][1] = ca * a.coefficients[j][1] + cb * b.coefficients[j][1];
  }
  return out;
}

inline AngularEigenfunction normalized(AngularEigenfunction phi) {
  const double n = phi.norm();
  if (!(n > 0.0)) fail(ErrorCode::MatchingResidual, "zero eigenfunction");
  return scaled(std::move(phi), 1.0 / n);
}

}  // namespace detail

// Largest violation of the N matching conditions, relative to the size of
// the coefficients.
inline double matching_residual(const StarGraph& g, const AngularEigenfunction& phi) {
  const std::size_t n = g.n_edges();
  if (phi.coefficients.size() != n) fail(ErrorCode::DimensionMismatch, "coefficient count differs from N");
  double scale = 0.0;
  for (const auto& c : phi.coefficients) scale = std::max(scale, detail::vec_norm(c));
  double worst = 0.0;
  for (std::size_t j = 2; j <= n; ++j) {
    const auto image = edge_transfer(g, j, phi.lambda).entries.apply(phi.coefficients[j - 1]);
    worst = std::max(worst, detail::vec_norm(detail::vec_sub(phi.coefficients[j - 2], image)));
  }
  const auto wrap = wrap_transfer(g, phi.lambda).entries.apply(phi.coefficients[0]);
  worst = std::max(worst, detail::vec_norm(detail::vec_sub(phi.coefficients[n - 1], wrap)));
  return scale > 0.0 ? worst / scale : worst;
}

// Basis of ker(T(lambda) - I), as sector-1 coefficient vectors.
inline std::vector<Vec2> kernel_basis(const StarGraph& g, double lambda, const SolverOptions& opt = {}) {
  const auto mono = monodromy(g, lambda);
  if (std::abs(mono.secular) > opt.residual_tol * secular_scale(g))
    fail(ErrorCode::NotAnEigenvalue, "Re tr T - 2 = " + std::to_string(mono.secular) + " at lambda = " +
                                         std::to_string(lambda));
  if (mono.identity_defect < opt.multiplicity_tol) return {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};

  const Mat2 d = mono.t - Mat2::identity();
  CMatrix m(2, 2);
  m(0, 0) = d.a;
  m(0, 1) = d.b;
  m(1, 0) = d.c;
  m(1, 1) = d.d;
  const auto svd = jacobi_svd(m);
  Vec2 v{svd.v(0, 0), svd.v(1, 0)};
  // Phase convention: first non-negligible entry real and positive.
  const Complex lead = std::abs(v[0]) > 1e-12 ? v[0] : v[1];
  const Complex ph = std::conj(lead) / std::abs(lead);
  return {Vec2{v[0] * ph, v[1] * ph}};
}

// Propagates c_1 around the graph (c_j = A_j^{-1} c_{j-1}), checks the
// wrap-around condition and normalises.
inline AngularEigenfunction angular_eigenfunction(const StarGraph& g, double lambda, const Vec2& c1) {
  const std::size_t n = g.n_edges();
  AngularEigenfunction phi;
  phi.lambda = lambda;
  phi.coefficients.resize(n);
  phi.sector_start.resize(n);
  phi.sector_width.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    phi.sector_start[j - 1] = g.omega(j - 1);
    phi.sector_width[j - 1] = g.sector_width(j);
  }
  phi.coefficients[0] = c1;
  for (std::size_t j = 2; j <= n; ++j)
    phi.coefficients[j - 1] =
        detail::inverse_unimodular(edge_transfer(g, j, lambda).entries).apply(phi.coefficients[j - 2]);

  phi = detail::normalized(std::move(phi));
  const double res = matching_residual(g, phi);
  if (res > kMatchingTol)
    fail(ErrorCode::MatchingResidual, "wrap-around condition violated by " + std::to_string(res) +
                                          " at lambda = " + std::to_string(lambda));
  return phi;
}

// The spin map: (c_{j,1}, c_{j,2}) -> (c_{j,2}, c_{j,1}) with lambda -> -lambda - 1,
// i.e. lambda_tilde -> -lambda_tilde.
inline AngularEigenfunction s_map(const AngularEigenfunction& phi) {
  AngularEigenfunction out = phi;
  out.lambda = -phi.lambda - 1.0;
  for (auto& c : out.coefficients) std::swap(c[0], c[1]);
  return out;
}

inline AngularEigenfunction s_map(const StarGraph& g, const AngularEigenfunction& phi) {
  auto out = s_map(phi);
  const double res = matching_residual(g, out);
  if (res > kMatchingTol) fail(ErrorCode::MatchingResidual, "S-image violates matching by " + std::to_string(res));
  return out;
}

// Orthonormal basis {phi_0^1, phi_0^2} of ker J_N with S phi_0^1 = phi_0^2.
// At lambda = -1/2 the spin map acts on sector-1 coefficients as a swap, so
// its +-1 eigenvectors come from c_1 = (1, +-1).
inline std::pair<AngularEigenfunction, AngularEigenfunction> zero_mode_basis(const StarGraph& g,
                                                                             const SolverOptions& opt = {}) {
  if (!has_zero_mode(g, opt)) fail(ErrorCode::NoZeroMode, "T(-1/2) is not the identity; 0 is not an eigenvalue");
  const auto plus = angular_eigenfunction(g, -0.5, Vec2{1.0, 1.0});
  const auto minus = angular_eigenfunction(g, -0.5, Vec2{1.0, -1.0});
  const double r = 1.0 / std::sqrt(2.0);
  auto phi1 = detail::combine(plus, r, minus, r);
  auto phi2 = detail::combine(plus, r, minus, -r);
  return {detail::normalized(std::move(phi1)), detail::normalized(std::move(phi2))};
}

// Orthonormal basis of the eigenspace at lambda (Gram-Schmidt when double).
// At lambda_tilde = 0 this is the S-adapted zero-mode basis.
inline std::vector<AngularEigenfunction> eigenspace_basis(const StarGraph& g, double lambda,
                                                          const SolverOptions& opt = {}) {
  if (std::abs(lambda + 0.5) <= opt.boundary_tol && has_zero_mode(g, opt)) {
    auto [a, b] = zero_mode_basis(g, opt);
    return {a, b};
  }
  std::vector<AngularEigenfunction> out;
  for (const auto& c : kernel_basis(g, lambda, opt)) {
    auto phi = angular_eigenfunction(g, lambda, c);
    for (const auto& q : out) phi = detail::combine(phi, 1.0, q, -l2_inner(q, phi));
    out.push_back(detail::normalized(std::move(phi)));
  }
  return out;
}

inline void check_defect_order(double lambda_tilde) {
  if (!(lambda_tilde >= 0.0 && lambda_tilde < 0.5))
    fail(ErrorCode::DomainError, "defect elements need lambda_tilde in [0, 1/2), got " + std::to_string(lambda_tilde));
}

// Radial defect element f^{+-}: (r^{1/2} K_{lt-1/2}(r), -+i r^{1/2} K_{lt+1/2}(r)).
inline Vec2 defect_element(double lambda_tilde, int sign, double r) {
  check_defect_order(lambda_tilde);
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidInput, "sign must be +1 or -1");
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "defect elements need r > 0");
  const double s = std::sqrt(r);
  return {s * bessel_k(lambda_tilde - 0.5, r), -double(sign) * kI * s * bessel_k(lambda_tilde + 0.5, r)};
}

// K_{lt-1/2}(r) phi^j(theta) +- K_{lt+1/2}(r) (S phi^j)(theta): the planar
// defect spinor attached to basis function j (1-based) of the eigenspace.
// For the zero mode only j = 1 enters, since S phi_0^1 = phi_0^2.
inline Vec2 defect_spinor_2d(const StarGraph& g, const EigenRecord& rec, std::size_t j, int sign, double r,
                             double theta, const SolverOptions& opt = {}) {
  check_defect_order(rec.lambda_tilde);
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidInput, "sign must be +1 or -1");
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "defect spinors need r > 0");
  const auto basis = eigenspace_basis(g, rec.lambda, opt);
  const bool zero = std::abs(rec.lambda_tilde) <= opt.boundary_tol;
  const std::size_t available = zero ? 1 : basis.size();
  if (j < 1 || j > available) fail(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(j));
  const auto& phi = basis[j - 1];
  const auto sphi = zero ? basis[1] : s_map(g, phi);
  const Vec2 a = phi(theta), b = sphi(theta);
  const double k1 = bessel_k(rec.lambda_tilde - 0.5, r), k2 = bessel_k(rec.lambda_tilde + 0.5, r);
  const double s = double(sign);
  return {k1 * a[0] + s * k2 * b[0], k1 * a[1] + s * k2 * b[1]};
}

// Position of one defect basis element in the parametrisation: eigenvalue
// and basis index within its eigenspace.
struct DefectSlot {
  double lambda_tilde;
  std::size_t basis_index;
};

struct ExtensionDescriptor {
  int n = 0;
  CMatrix u_matrix;
  bool is_distinguished = false;
  bool zero_mode = false;
  // 1/2 + min(sigma(J_N) cap (0, inf)); meaningful for the distinguished
  // extension and absent when 0 is an eigenvalue.
  std::optional<double> regularity_sup;
  std::vector<DefectSlot> slots;
};

inline double smallest_positive_eigenvalue(const StarGraph& g, const SolverOptions& opt = {}) {
  for (double hi = 1.0; hi <= 64.0; hi *= 2.0) {
    const auto s = find_eigenvalues(g, 0.0, hi, opt);
    if (!s.records.empty()) return s.records.front().lambda_tilde;
  }
  fail(ErrorCode::SolverDiverged, "no positive eigenvalue found below 64");
}

inline ExtensionDescriptor extension_descriptor(const StarGraph& g, const CMatrix& u, const SolverOptions& opt = {}) {
  const auto d = deficiency_indices(g, opt);
  if (d.n_plus == 0) fail(ErrorCode::DimensionMismatch, "the operator is self-adjoint; there is nothing to extend");
  if (u.rows() != std::size_t(d.n_plus) || u.cols() != std::size_t(d.n_plus))
    fail(ErrorCode::DimensionMismatch, "extension matrix must be " + std::to_string(d.n_plus) + "x" +
                                           std::to_string(d.n_plus));
  const double defect = unitarity_defect(u);
  if (defect > 1e-10) fail(ErrorCode::NotUnitary, "||U U* - I|| = " + std::to_string(defect));

  ExtensionDescriptor out;
  out.n = d.n_plus;
  out.u_matrix = u;
  out.is_distinguished = (u - CMatrix::identity(u.rows())).frobenius() < 1e-12;
  out.zero_mode = has_zero_mode(g, opt);
  if (out.zero_mode) out.slots.push_back({0.0, 1});
  for (const auto& r : d.spectrum.records)
    if (r.lambda_tilde > opt.boundary_tol)
      for (int j = 1; j <= r.multiplicity; ++j) out.slots.push_back({r.lambda_tilde, std::size_t(j)});
  if (!out.zero_mode) out.regularity_sup = 0.5 + smallest_positive_eigenvalue(g, opt);
  return out;
}

}  // namespace starspec
