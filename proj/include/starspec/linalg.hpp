#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "starspec/errors.hpp"

namespace starspec {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// e^{i*phase}. The phase is reduced to [-pi, pi] first so that large
// arguments such as 2*pi*lambda for |lambda| >> 1 keep full accuracy.
inline Complex unit_phase(double phase) { return std::polar(1.0, std::remainder(phase, kTwoPi)); }

using Vec2 = std::array<Complex, 2>;

struct Mat2 {
  Complex a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Complex trace() const { return a + d; }
  Complex det() const { return a * d - b * c; }

  double frobenius() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }

  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

  Vec2 apply(const Vec2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2 operator*(Complex s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

// Dense row-major complex matrix. Sizes here never exceed a few dozen, so
// nothing fancier is warranted.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    if (x.cols_ != y.rows_) fail(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    CMatrix out(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const Complex xik = x(i, k);
        if (xik == Complex{}) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += xik * y(k, j);
      }
    return out;
  }

  friend CMatrix operator-(CMatrix x, const CMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      fail(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
    for (std::size_t i = 0; i < x.data_.size(); ++i) x.data_[i] -= y.data_[i];
    return x;
  }

  std::vector<Complex> apply(const std::vector<Complex>& v) const {
    if (v.size() != cols_) fail(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

// Determinant by LU with partial pivoting.
inline Complex determinant(CMatrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) fail(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    const Complex pivot = a(k, k);
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / pivot;
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

struct Svd {
  std::vector<double> sigma;  // ascending
  CMatrix v;                  // column k is the right singular vector of sigma[k]
};

// One-sided (Hestenes) Jacobi SVD. Singular values come out with high
// relative accuracy, which matters because the smallest ones are what we
// read rank and null vectors from.
inline Svd jacobi_svd(CMatrix a, double tol = 1e-15, int max_sweeps = 80) {
  const std::size_t m = a.rows(), n = a.cols();
  CMatrix v = CMatrix::identity(n);

  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s{};
    for (std::size_t i = 0; i < m; ++i) s += std::conj(a(i, p)) * a(i, q);
    return s;
  };
  auto column_norm2 = [&](std::size_t p) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, p));
    return s;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_norm2(p);
        const double beta = column_norm2(q);
        const Complex gamma = column_dot(p, q);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        // Rotate the phase of column q so the cross term is real, then
        // apply an ordinary real Jacobi rotation.
        const Complex ph = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex ap = a(i, p);
          const Complex aq = a(i, q) * ph;
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v(i, p);
          const Complex vq = v(i, q) * ph;
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[k] = std::sqrt(column_norm2(k));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] < sigma[y]; });

  Svd out;
  out.sigma.resize(n);
  out.v = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.sigma[k] = sigma[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, order[k]);
  }
  return out;
}

inline std::vector<double> singular_values(const CMatrix& a) { return jacobi_svd(a).sigma; }

inline double unitarity_defect(const CMatrix& u) {
  return (u * u.adjoint() - CMatrix::identity(u.rows())).frobenius();
}

inline Complex inner(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace starspec
