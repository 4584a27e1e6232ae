#pragma once

#include <Eigen/Dense>

namespace spsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Spectral, Frobenius and trace (nuclear) norms of a symmetric matrix.
struct NormTriple {
  double spectral = 0.0;
  double frobenius = 0.0;
  double trace = 0.0;
};

/// Norms of a symmetric matrix computed from its eigenvalues.
NormTriple norms_from_eigenvalues(const Vector& eigenvalues);

/// Norms of an arbitrary symmetric matrix (indefinite allowed).
NormTriple symmetric_norms(const Matrix& m);

/// Orthonormal basis for the range of `m` from a column-pivoted QR.
/// Columns whose |R_ii| fall below `rel_tol * |R_00|` are dropped.
Matrix orthonormal_range(const Matrix& m, double rel_tol);

/// Moore-Penrose pseudoinverse via SVD with a relative singular-value cutoff.
Matrix pseudoinverse(const Matrix& m, double rel_tol = 1e-12);

/// Squared Euclidean norms of the rows of `m`.
Vector row_norms_squared(const Matrix& m);

}  // namespace spsd
