#pragma once

#include <cstdint>
#include <optional>

#include "spsd/core.hpp"
#include "spsd/linalg.hpp"

namespace spsd {

enum class LevAlgorithm { tall, spectral, frob, power };

std::string_view to_string(LevAlgorithm a);

/// Approximate leverage scores and the parameters that produced them.
struct ApproxLeverage {
  Vector scores;
  LevAlgorithm algorithm = LevAlgorithm::tall;
  double epsilon = 0.0;
  double delta = 0.0;
  /// Power exponent q (spectral, frob) or iterations performed (power).
  int q = 0;
  Index r1 = 0;  ///< projection rows (tall) or projection width r (frob, power)
  Index r2 = 0;  ///< Gaussian width for the row-norm estimate (tall)
  int iterations_used = 0;
  bool converged = true;
  /// The requested projection size reached n and the scores were computed exactly.
  bool fallback_exact = false;
  /// The triangular factor was numerically singular and its trailing part was dropped.
  bool rank_deficient = false;
  /// The Gaussian row-norm projection was skipped because r2 >= rank.
  bool projection_skipped = false;
};

struct TallOptions {
  double epsilon = 1.0;
  double delta = 0.1;
  std::optional<Index> r1;
  std::optional<Index> r2;
  /// Relative |R_ii| cutoff of the pivoted QR of Pi_1 X.
  double rank_tolerance = 1e-10;
};

/// r1 = ceil(eps^-2 ln(d/delta) (sqrt(d) + sqrt(ln(n/delta)))^2).
Index tall_r1(Index n, Index d, double epsilon, double delta);
/// r2 = ceil(eps^-2 (ln n + ln(1/delta))).
Index tall_r2(Index n, double epsilon, double delta);

/// Leverage scores of a tall n x d matrix: SRFT row mixing, pivoted QR of
/// Pi_1 X, then row norms of X R^{-1} Pi_2.
ApproxLeverage approx_lev_tall(const Matrix& x, const TallOptions& opts, std::uint64_t seed);

/// The iteration count prescribed for the Gaussian variant. Throws
/// ArgumentError when k < 2 or when the denominator 2 ln(1 + eps/10) - 1/2
/// is not positive.
int spectral_power_count(Index n, Index d, Index k, double epsilon);

struct SpectralOptions {
  double epsilon = 0.5;
  double delta = 0.1;
  /// Prescribed q. Without it the closed-form count is used.
  std::optional<int> q;
  double rank_tolerance = 1e-10;
};

/// Rank-k leverage of a general n x d matrix: B = (A A^T)^q A Pi with
/// Gaussian Pi of width 2k, then `approx_lev_tall` on B.
ApproxLeverage approx_lev_spectral(const Matrix& a, Index k, const SpectralOptions& opts,
                                   std::uint64_t seed);

/// r >= ceil(36 eps^-2 (sqrt(k) + sqrt(8 ln(k d)))^2 ln k).
Index frob_width(Index k, Index d, double epsilon);

struct FrobOptions {
  int q = 0;
  double epsilon = 0.5;
  /// Projection width; the closed-form width when unset.
  std::optional<Index> r;
};

/// Exact rank-k leverage of B = (A A^T)^q A Pi with an SRFT Pi of width r.
ApproxLeverage approx_lev_frob(const SpsdMatrix& a, Index k, const FrobOptions& opts,
                               std::uint64_t seed);

struct PowerOptions {
  double tol = 1e-2;
  int max_iters = 50;
  /// Starting block (n x k). A Gaussian block when unset.
  std::optional<Matrix> start;
};

/// Subspace iteration on A with r = k, stopped when the leverage scores of
/// A^{2i+1} Pi change by less than tol in the infinity norm.
ApproxLeverage approx_lev_power(const SpsdMatrix& a, Index k, const PowerOptions& opts,
                                std::uint64_t seed);

/// Exact leverage scores of the column space of X (pivoted QR, numerical rank).
Vector exact_tall_leverage(const Matrix& x, double rank_tolerance = 1e-10);

}  // namespace spsd
