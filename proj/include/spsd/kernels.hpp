#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spsd/core.hpp"

namespace spsd {

/// n observations (rows) in d dimensions.
struct PointCloud {
  Matrix X;
  std::vector<std::string> feature_names;

  Index n() const noexcept { return X.rows(); }
  Index d() const noexcept { return X.cols(); }
};

struct Edge {
  Index i = 0;
  Index j = 0;
  double weight = 1.0;
};

/// Undirected weighted graph. Construction drops self-loops and merges the
/// two directions of an edge by max(w_ij, w_ji).
class Graph {
 public:
  Graph(Index n, const std::vector<Edge>& edges);

  Index n() const noexcept { return n_; }
  /// Canonical edge list with i < j.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  Matrix adjacency() const;

 private:
  Index n_;
  std::vector<Edge> edges_;
};

SpsdMatrix linear_kernel(const PointCloud& p);

/// A_ij = exp(-||x_i - x_j||^2 / sigma^2).
SpsdMatrix rbf_kernel(const PointCloud& p, double sigma);

struct SparseRbfResult {
  SpsdMatrix kernel;
  int nu = 0;
  double cutoff = 0.0;
  /// nu < (d + 1) / 2: positive semi-definiteness is not guaranteed.
  bool psd_not_guaranteed = false;
};

/// A_ij = max(0, 1 - ||x_i - x_j|| / C)^nu * exp(-||x_i - x_j||^2 / sigma^2),
/// with nu = ceil((d + 1) / 2) and C = 3 sigma by default.
SparseRbfResult sparse_rbf_kernel(const PointCloud& p, double sigma,
                                  std::optional<int> nu = std::nullopt,
                                  std::optional<double> cutoff = std::nullopt);

/// I - D^{-1/2} W D^{-1/2}. Throws ArgumentError naming the first isolated node.
SpsdMatrix normalized_laplacian(const Graph& g);

struct WhitenResult {
  PointCloud points;
  /// Columns that were constant and are now all zero.
  std::vector<Index> constant_columns;
};

/// Centers every column and scales it to unit Euclidean norm.
WhitenResult whiten(const PointCloud& p);

/// Matrix of squared pairwise distances, clamped at zero.
Matrix squared_distances(const Matrix& x);

}  // namespace spsd
