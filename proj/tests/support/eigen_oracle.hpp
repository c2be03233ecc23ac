#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "starspec/linalg.hpp"

namespace oracle {

inline Eigen::MatrixXcd to_eigen(const starspec::CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
  return e;
}

// Eigenphases in [0, 2 pi), sorted, with repetition.
inline std::vector<double> eigenphases(const starspec::CMatrix& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(u));
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double th = std::arg(es.eigenvalues()(i));
    if (th < 0) th += 2.0 * std::numbers::pi;
    out.push_back(th);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
