#pragma once

#include <memory>

#include "spsd/linalg.hpp"

namespace spsd {

inline constexpr double kDefaultPsdTolerance = 1e-10;
inline constexpr Index kDefaultDimensionCap = 20000;

/// Dense symmetric positive semi-definite matrix.
///
/// The input is symmetrized on construction and its eigendecomposition is
/// computed once and shared by all copies. Construction fails if the smallest
/// eigenvalue is below -psd_tolerance * (largest eigenvalue).
class SpsdMatrix {
 public:
  explicit SpsdMatrix(const Matrix& entries, double psd_tolerance = kDefaultPsdTolerance,
                      Index dimension_cap = kDefaultDimensionCap);

  /// Builds A = U diag(lambda) U^T from a known orthonormal eigenbasis.
  /// `lambda` must be sorted in nonincreasing order.
  static SpsdMatrix from_eigen(const Matrix& eigenvectors, const Vector& eigenvalues,
                               double psd_tolerance = kDefaultPsdTolerance);

  Index n() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  double psd_tolerance() const noexcept { return psd_tolerance_; }

  /// Eigenvalues in nonincreasing order, negatives clamped to zero.
  const Vector& eigenvalues() const noexcept { return eig_->values; }
  /// Eigenvectors matching `eigenvalues()` column by column.
  const Matrix& eigenvectors() const noexcept { return eig_->vectors; }

  /// A^p for real p >= 0, evaluated through the eigendecomposition.
  Matrix power(double p) const;

 private:
  struct EigenData {
    Matrix vectors;
    Vector values;
  };
  SpsdMatrix() = default;

  Matrix entries_;
  double psd_tolerance_ = kDefaultPsdTolerance;
  std::shared_ptr<const EigenData> eig_;
};

/// Eigendecomposition split at rank k: A = U1 S1 U1^T + U2 S2 U2^T.
struct EigenPartition {
  Index k = 0;
  Matrix U1;
  Vector sigma1;
  Matrix U2;
  Vector sigma2;
  /// lambda_k == lambda_{k+1}: the top-k eigenspace is not unique and the
  /// split follows the deterministic eigenvalue ordering.
  bool degenerate_split = false;

  Index n() const noexcept { return U1.rows(); }
};

/// Leverage scores relative to the best rank-k approximation.
struct LeverageProfile {
  Index k = 0;
  Vector scores;
  double coherence = 0.0;
};

EigenPartition eigendecompose(const SpsdMatrix& a, Index k);

NormTriple norms(const SpsdMatrix& a);

struct BestRankK {
  SpsdMatrix approximation;
  NormTriple optimal_errors;
};

BestRankK best_rank_k(const EigenPartition& e);

/// Optimal rank-k errors (max, l2, l1 of the tail eigenvalues).
NormTriple optimal_errors(const EigenPartition& e);

LeverageProfile leverage_scores(const EigenPartition& e);

/// Leverage profile from any n x k matrix with orthonormal columns.
LeverageProfile leverage_from_basis(const Matrix& basis);

/// ceil(||A||_F^2 / ||A||_2^2). Throws ArgumentError for the zero matrix.
Index stable_rank(const SpsdMatrix& a);

class SketchMatrix;

/// Reference evaluation of A^{1/2} P_{A^{q-1/2} S} A^{1/2} through the full
/// eigendecomposition. Singular values of A^{q-1/2} S at or below
/// rel_tol * sigma_max are treated as zero; the default mirrors the cutoff
/// the sketch builder applies to W.
Matrix sqrt_projection_oracle(const SpsdMatrix& a, const SketchMatrix& s, int q,
                              double rel_tol = -1.0);

}  // namespace spsd
