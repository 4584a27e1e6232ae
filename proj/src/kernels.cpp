#include "spsd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "spsd/error.hpp"

namespace spsd {
namespace {

void check_points(const PointCloud& p) {
  if (p.n() < 1) throw ArgumentError("point cloud is empty");
  if (!p.X.allFinite()) throw ArgumentError("point cloud has non-finite entries");
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be positive");
}

}  // namespace

Graph::Graph(Index n, const std::vector<Edge>& edges) : n_(n) {
  if (n < 1) throw ArgumentError("graph needs at least one node");
  std::map<std::pair<Index, Index>, double> merged;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw ArgumentError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                          ") is out of range for " + std::to_string(n) + " nodes");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw ArgumentError("edge weights must be finite and nonnegative");
    if (e.i == e.j) continue;
    const auto key = std::minmax(e.i, e.j);
    auto [it, inserted] = merged.emplace(key, e.weight);
    if (!inserted) it->second = std::max(it->second, e.weight);
  }
  edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) edges_.push_back({key.first, key.second, w});
}

Matrix Graph::adjacency() const {
  Matrix w = Matrix::Zero(n_, n_);
  for (const Edge& e : edges_) {
    w(e.i, e.j) = e.weight;
    w(e.j, e.i) = e.weight;
  }
  return w;
}

Matrix squared_distances(const Matrix& x) {
  const Vector r = row_norms_squared(x);
  Matrix d = (-2.0 * x * x.transpose()).eval();
  d.colwise() += r;
  d.rowwise() += r.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return 0.5 * (d + d.transpose());
}

SpsdMatrix linear_kernel(const PointCloud& p) {
  check_points(p);
  return SpsdMatrix(p.X * p.X.transpose());
}

SpsdMatrix rbf_kernel(const PointCloud& p, double sigma) {
  check_points(p);
  check_sigma(sigma);
  const double s2 = sigma * sigma;
  return SpsdMatrix(squared_distances(p.X).unaryExpr([s2](double d) { return std::exp(-d / s2); }));
}

SparseRbfResult sparse_rbf_kernel(const PointCloud& p, double sigma, std::optional<int> nu,
                                  std::optional<double> cutoff) {
  check_points(p);
  check_sigma(sigma);
  const double half = (static_cast<double>(p.d()) + 1.0) / 2.0;
  const int v = nu.value_or(static_cast<int>(std::ceil(half)));
  const double c = cutoff.value_or(3.0 * sigma);
  if (v < 0) throw ArgumentError("sparse_rbf_kernel: nu must be nonnegative");
  if (!(c > 0.0)) throw ArgumentError("sparse_rbf_kernel: cutoff must be positive");

  const double s2 = sigma * sigma;
  const Matrix k = squared_distances(p.X).unaryExpr([&](double d2) {
    const double taper = std::max(0.0, 1.0 - std::sqrt(d2) / c);
    return taper == 0.0 ? 0.0 : std::pow(taper, v) * std::exp(-d2 / s2);
  });
  const bool flagged = static_cast<double>(v) < half;
  try {
    return {SpsdMatrix(k), v, c, flagged};
  } catch (const ArgumentError& e) {
    throw ArgumentError(std::string("sparse_rbf_kernel with nu=") + std::to_string(v) +
                        " below (d+1)/2 produced an indefinite matrix: " + e.what());
  }
}

SpsdMatrix normalized_laplacian(const Graph& g) {
  const Matrix w = g.adjacency();
  const Vector deg = w.rowwise().sum();
  for (Index i = 0; i < g.n(); ++i)
    if (!(deg(i) > 0.0)) throw ArgumentError("normalized_laplacian: node " + std::to_string(i) + " is isolated");
  const Vector dinv = deg.cwiseSqrt().cwiseInverse();
  Matrix l = -(dinv.asDiagonal() * w * dinv.asDiagonal());
  l.diagonal().setOnes();
  return SpsdMatrix(l);
}

WhitenResult whiten(const PointCloud& p) {
  WhitenResult out;
  out.points = p;
  Matrix& x = out.points.X;
  if (x.rows() == 0) return out;
  for (Index j = 0; j < x.cols(); ++j) {
    const double hi = x.col(j).maxCoeff();
    const double lo = x.col(j).minCoeff();
    if (hi - lo <= 1e-14 * std::max(std::abs(hi), std::abs(lo))) {
      x.col(j).setZero();
      out.constant_columns.push_back(j);
      continue;
    }
    x.col(j).array() -= x.col(j).mean();
    x.col(j) /= x.col(j).norm();
  }
  return out;
}

}  // namespace spsd
