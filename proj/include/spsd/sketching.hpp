#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "spsd/core.hpp"
#include "spsd/linalg.hpp"

namespace spsd {

enum class SketchMethod { uniform, leverage, gaussian, srft };

std::string_view to_string(SketchMethod m);

/// An n x ell sketching operator.
///
/// Sampling sketches (uniform, leverage) are stored as one (row index, scale)
/// pair per column. Gaussian sketches are stored densely. SRFT sketches keep
/// their factors sqrt(n/ell) * D * T * R (Rademacher signs, orthonormal DCT-II,
/// selected columns) and are applied with a fast transform.
class SketchMatrix {
 public:
  static SketchMatrix sampling(Index n, std::vector<Index> rows, std::vector<double> scales,
                               SketchMethod method, std::uint64_t seed, bool replacement);
  static SketchMatrix dense(Matrix entries, SketchMethod method, std::uint64_t seed);
  static SketchMatrix srft(Index n, Vector signs, std::vector<Index> columns, std::uint64_t seed);
  /// Wraps an arbitrary dense operator (e.g. an orthonormal basis) as a sketch.
  static SketchMatrix from_dense(Matrix entries);

  Index n() const noexcept { return n_; }
  Index ell() const noexcept { return ell_; }
  SketchMethod method() const noexcept { return method_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool replacement() const noexcept { return replacement_; }
  bool is_sampling() const noexcept {
    return method_ == SketchMethod::uniform || method_ == SketchMethod::leverage;
  }

  /// Row index and scale of the single nonzero in each column (sampling only).
  const std::vector<Index>& sample_rows() const noexcept { return rows_; }
  const std::vector<double>& sample_scales() const noexcept { return scales_; }
  /// Rademacher signs and selected transform columns (srft only).
  const Vector& srft_signs() const noexcept { return signs_; }
  const std::vector<Index>& srft_columns() const noexcept { return rows_; }

  /// Explicit n x ell matrix.
  Matrix to_dense() const;

  /// X * S for X with n columns.
  Matrix right_apply(const Matrix& x) const;
  /// S^T * X for X with n rows.
  Matrix transpose_apply(const Matrix& x) const;

 private:
  Index n_ = 0;
  Index ell_ = 0;
  SketchMethod method_ = SketchMethod::gaussian;
  std::uint64_t seed_ = 0;
  bool replacement_ = false;
  std::vector<Index> rows_;
  std::vector<double> scales_;
  Matrix dense_;
  Vector signs_;
};

/// Importance-sampling probabilities over the columns of A.
struct SamplingDistribution {
  Vector p;
  /// Declared beta in (0, 1]; 1 for exact leverage probabilities.
  double beta = 1.0;
};

/// p_j = l_j / k, beta = 1.
SamplingDistribution leverage_distribution(const LeverageProfile& lev);

inline constexpr double kScoreFloor = 1e-12;

/// p_j proportional to max(score_j, kScoreFloor / n). `beta` is the declared
/// certification level, e.g. (1 - eps) / (1 + eps) for (1 +- eps) scores.
SamplingDistribution distribution_from_scores(const Vector& scores, double beta = 1.0);

/// Largest beta in (0, 1] with p_j >= (beta / k) l_j for all j.
double certified_beta(const SamplingDistribution& dist, const LeverageProfile& lev);

SketchMatrix uniform_sketch(Index n, Index ell, bool replacement, std::uint64_t seed);
SketchMatrix leverage_sketch(const SamplingDistribution& dist, Index ell, std::uint64_t seed);
SketchMatrix gaussian_sketch(Index n, Index ell, std::uint64_t seed);
SketchMatrix srft_sketch(Index n, Index ell, std::uint64_t seed);

}  // namespace spsd
