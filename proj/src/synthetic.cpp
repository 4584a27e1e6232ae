#include "spsd/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "spsd/error.hpp"
#include "spsd/random.hpp"

namespace spsd {

Matrix random_orthogonal(Index n, std::uint64_t seed) {
  RandomStream rng(seed, 0x0A7);
  Eigen::HouseholderQR<Matrix> qr(rng.gaussian_matrix(n, n));
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

SpsdMatrix spsd_with_spectrum(const Vector& eigenvalues, std::uint64_t seed) {
  Vector lam = eigenvalues;
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
  return SpsdMatrix::from_eigen(random_orthogonal(lam.size(), seed), lam);
}

SpsdMatrix random_spsd(Index n, double decay, std::uint64_t seed) {
  if (n < 1 || !(decay > 0.0)) throw ArgumentError("random_spsd: need n >= 1 and decay > 0");
  Vector lam(n);
  for (Index i = 0; i < n; ++i) lam(i) = std::pow(decay, static_cast<double>(i));
  return spsd_with_spectrum(lam, seed);
}

SpsdMatrix gapped_spsd(Index n, Index k, double gap, std::uint64_t seed) {
  if (k < 1 || k >= n) throw ArgumentError("gapped_spsd: need 1 <= k < n");
  Vector lam = Vector::Ones(n);
  lam.head(k).setConstant(gap);
  return spsd_with_spectrum(lam, seed);
}

SpsdMatrix low_rank_spsd(Index n, Index k, std::uint64_t seed) {
  if (k < 1 || k > n) throw ArgumentError("low_rank_spsd: need 1 <= k <= n");
  Vector lam = Vector::Zero(n);
  for (Index i = 0; i < k; ++i) lam(i) = static_cast<double>(k - i);
  return spsd_with_spectrum(lam, seed);
}

PointCloud clustered_points(Index n, Index d, Index clusters, std::uint64_t seed) {
  if (n < 1 || d < 1 || clusters < 1 || 2 * clusters > n)
    throw ArgumentError("clustered_points: need n, d >= 1 and 1 <= clusters <= n / 2");
  RandomStream rng(seed, 0xC1);

  // Cluster sizes decay geometrically (ratio 0.6), so the smallest clusters
  // hold a handful of points each.
  std::vector<Index> sizes(static_cast<std::size_t>(clusters));
  double total = 0.0;
  for (Index c = 0; c < clusters; ++c) total += std::pow(0.6, static_cast<double>(c));
  Index assigned = 0;
  for (Index c = clusters - 1; c >= 1; --c) {
    const double share = static_cast<double>(n) * std::pow(0.6, static_cast<double>(c)) / total;
    sizes[static_cast<std::size_t>(c)] = std::max<Index>(2, std::lround(share));
    assigned += sizes[static_cast<std::size_t>(c)];
  }
  sizes[0] = n - assigned;
  if (sizes[0] < 2) throw ArgumentError("clustered_points: too many clusters for n");

  // Centers are 2 apart along the first axis; spreads are between 0.002 and 0.006.
  PointCloud p;
  p.X.resize(n, d);
  Index row = 0;
  for (Index c = 0; c < clusters; ++c) {
    Vector center = Vector::Zero(d);
    center(0) = 2.0 * static_cast<double>(c);
    for (Index j = 1; j < d; ++j) center(j) = rng.normal();
    const double spread = 0.002 + 0.004 * rng.uniform();
    for (Index i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i, ++row)
      for (Index j = 0; j < d; ++j) p.X(row, j) = center(j) + spread * rng.normal();
  }
  return p;
}

PointCloud gaussian_points(Index n, Index d, std::uint64_t seed) {
  RandomStream rng(seed, 0x6A);
  return {rng.gaussian_matrix(n, d), {}};
}

}  // namespace spsd
