#pragma once

#include "spsd/linalg.hpp"

namespace spsd {

/// Explicit n x n orthonormal DCT-II matrix T with
/// T(k, j) = c_k cos(pi k (2j + 1) / (2n)), c_0 = sqrt(1/n), c_k = sqrt(2/n).
Matrix dct_matrix(Index n);

/// T * X column by column (orthonormal DCT-II), O(n log n) per column.
Matrix dct(const Matrix& x);

/// T^T * X column by column (orthonormal DCT-III, the inverse of `dct`).
Matrix dct_transpose(const Matrix& x);

}  // namespace spsd
