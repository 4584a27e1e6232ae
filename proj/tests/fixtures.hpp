#pragma once

// Shared helpers for the unit tests. Oracles here deliberately avoid the
// library's own decompositions: eigenvalues come from Eigen's general
// (nonsymmetric) solver or from a Jacobi SVD.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "spsd/core.hpp"
#include "spsd/synthetic.hpp"

namespace spsd::test {

/// Eigenvalues of a symmetric matrix, descending, via the general real solver.
inline Vector oracle_eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  Vector v = es.eigenvalues().real();
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

/// Singular values, descending, via two-sided Jacobi.
inline Vector oracle_singular_values(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

/// Orthonormal basis of the column space of a full-column-rank matrix (unpivoted Householder).
inline Matrix oracle_orthonormal(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

/// Random SPSD matrix with eigenvalues 0.7^i.
inline SpsdMatrix seeded_spsd(Index n, std::uint64_t seed) { return random_spsd(n, 0.7, seed); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace spsd::test
