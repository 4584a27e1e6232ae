#pragma once

#include <cstdint>

#include "spsd/core.hpp"
#include "spsd/kernels.hpp"

namespace spsd {

/// Haar-distributed n x n orthogonal matrix (QR of a Gaussian with sign fix).
Matrix random_orthogonal(Index n, std::uint64_t seed);

/// Q diag(lambda) Q^T with a random orthogonal Q.
SpsdMatrix spsd_with_spectrum(const Vector& eigenvalues, std::uint64_t seed);

/// Geometrically decaying spectrum lambda_i = decay^i.
SpsdMatrix random_spsd(Index n, double decay, std::uint64_t seed);

/// Top k eigenvalues equal to `gap`, the rest equal to 1, random eigenvectors.
SpsdMatrix gapped_spsd(Index n, Index k, double gap, std::uint64_t seed);

/// Exactly rank k with eigenvalues k, k-1, ..., 1 on the top block.
SpsdMatrix low_rank_spsd(Index n, Index k, std::uint64_t seed);

/// Tight, well separated clusters whose sizes decay geometrically. Kernels
/// built on such clouds have strongly nonuniform leverage scores: the points of
/// the smallest clusters carry the largest scores.
PointCloud clustered_points(Index n, Index d, Index clusters, std::uint64_t seed);

/// Standard normal point cloud.
PointCloud gaussian_points(Index n, Index d, std::uint64_t seed);

}  // namespace spsd
