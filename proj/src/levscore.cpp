#include "spsd/levscore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spsd/error.hpp"
#include "spsd/random.hpp"
#include "spsd/sketching.hpp"

namespace spsd {
namespace {

constexpr std::uint64_t kTagPi1 = 11;
constexpr std::uint64_t kTagPi2 = 12;
constexpr std::uint64_t kTagPi = 13;
constexpr std::uint64_t kTagInner = 14;

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) { return splitmix64(seed ^ splitmix64(tag)); }

void normalize(Matrix& b) {
  const double s = b.norm();
  if (s > 0.0 && std::isfinite(s)) b /= s;
}

Matrix thin_q(const Matrix& b) {
  Eigen::HouseholderQR<Matrix> qr(b);
  return qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
}

Vector top_k_left_leverage(const Matrix& b, Index k) {
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU);
  return row_norms_squared(svd.matrixU().leftCols(std::min<Index>(k, svd.matrixU().cols())));
}

void check_probability_params(double epsilon, double delta, const char* who) {
  if (!(epsilon > 0.0)) throw ArgumentError(std::string(who) + ": epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError(std::string(who) + ": delta must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(LevAlgorithm a) {
  switch (a) {
    case LevAlgorithm::tall: return "tall";
    case LevAlgorithm::spectral: return "spectral";
    case LevAlgorithm::frob: return "frob";
    case LevAlgorithm::power: return "power";
  }
  return "unknown";
}

Index tall_r1(Index n, Index d, double epsilon, double delta) {
  check_probability_params(epsilon, delta, "tall_r1");
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double root = std::sqrt(dd) + std::sqrt(std::log(nd / delta));
  return static_cast<Index>(std::ceil(std::log(dd / delta) * root * root / (epsilon * epsilon)));
}

Index tall_r2(Index n, double epsilon, double delta) {
  check_probability_params(epsilon, delta, "tall_r2");
  return static_cast<Index>(
      std::ceil((std::log(static_cast<double>(n)) + std::log(1.0 / delta)) / (epsilon * epsilon)));
}

Vector exact_tall_leverage(const Matrix& x, double rank_tolerance) {
  return row_norms_squared(orthonormal_range(x, rank_tolerance));
}

ApproxLeverage approx_lev_tall(const Matrix& x, const TallOptions& opts, std::uint64_t seed) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (d < 1 || n <= d)
    throw ArgumentError("approx_lev_tall: need n > d >= 1, got " + std::to_string(n) + "x" +
                        std::to_string(d));
  ApproxLeverage out;
  out.algorithm = LevAlgorithm::tall;
  out.epsilon = opts.epsilon;
  out.delta = opts.delta;
  out.r1 = opts.r1.value_or(tall_r1(n, d, opts.epsilon, opts.delta));
  out.r2 = opts.r2.value_or(tall_r2(n, opts.epsilon, opts.delta));
  if (out.r1 < 1 || out.r2 < 1) throw ArgumentError("approx_lev_tall: r1 and r2 must be positive");

  if (out.r1 >= n) {
    out.fallback_exact = true;
    out.scores = exact_tall_leverage(x, opts.rank_tolerance);
    return out;
  }

  const SketchMatrix pi1 = srft_sketch(n, out.r1, derive(seed, kTagPi1));
  Eigen::ColPivHouseholderQR<Matrix> qr(pi1.transpose_apply(x));
  const Matrix& r = qr.matrixQR();
  const double top = std::abs(r(0, 0));
  Index rank = 0;
  while (rank < std::min(out.r1, d) && top > 0.0 && std::abs(r(rank, rank)) > opts.rank_tolerance * top)
    ++rank;
  out.rank_deficient = rank < d;
  if (rank == 0) {
    out.scores = Vector::Zero(n);
    return out;
  }

  const Matrix xp = (x * qr.colsPermutation()).leftCols(rank);
  const auto r11 = r.topLeftCorner(rank, rank).triangularView<Eigen::Upper>();
  Matrix inner;  // R11^{-1} (or R11^{-1} Pi_2)
  if (out.r2 >= rank) {
    out.projection_skipped = true;
    inner = r11.solve(Matrix::Identity(rank, rank));
  } else {
    RandomStream rng(derive(seed, kTagPi2));
    const Matrix pi2 = rng.gaussian_matrix(rank, out.r2) / std::sqrt(static_cast<double>(out.r2));
    inner = r11.solve(pi2);
  }
  out.scores = row_norms_squared(xp * inner);
  return out;
}

int spectral_power_count(Index n, Index d, Index k, double epsilon) {
  if (k < 2) throw ArgumentError("spectral_power_count: the iteration formula needs k >= 2");
  if (k > std::min(n, d)) throw ArgumentError("spectral_power_count: k exceeds min(n, d)");
  const double denom = 2.0 * std::log1p(epsilon / 10.0) - 0.5;
  if (!(denom > 0.0))
    throw ArgumentError("spectral_power_count: 2 ln(1 + eps/10) - 1/2 is not positive for eps=" +
                        std::to_string(epsilon) +
                        "; pass an explicit q or use approx_lev_frob");
  const double kd = static_cast<double>(k);
  const double m = static_cast<double>(std::min(n, d));
  const double num = std::log(1.0 + std::sqrt(kd / (kd - 1.0)) +
                              std::numbers::e * std::sqrt(2.0 / kd) * std::sqrt(m - kd));
  return static_cast<int>(std::ceil(num / denom));
}

ApproxLeverage approx_lev_spectral(const Matrix& a, Index k, const SpectralOptions& opts,
                                   std::uint64_t seed) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (k < 1 || 2 * k > std::min(n, d))
    throw ArgumentError("approx_lev_spectral: need 1 <= k <= min(n, d) / 2");
  const int q = opts.q ? *opts.q : spectral_power_count(n, d, k, opts.epsilon);
  if (q < 0) throw ArgumentError("approx_lev_spectral: q must be nonnegative");

  RandomStream rng(derive(seed, kTagPi));
  Matrix b = a * rng.gaussian_matrix(d, 2 * k);
  normalize(b);
  for (int i = 0; i < q; ++i) {
    b = a * (a.transpose() * b);
    normalize(b);
  }
  TallOptions tall;
  tall.epsilon = opts.epsilon;
  tall.delta = opts.delta;
  tall.rank_tolerance = opts.rank_tolerance;
  ApproxLeverage out = approx_lev_tall(b, tall, derive(seed, kTagInner));
  out.algorithm = LevAlgorithm::spectral;
  out.q = q;
  return out;
}

Index frob_width(Index k, Index d, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("frob_width: epsilon must be positive");
  const double kd = static_cast<double>(k);
  const double root = std::sqrt(kd) + std::sqrt(8.0 * std::log(kd * static_cast<double>(d)));
  return static_cast<Index>(std::ceil(36.0 * root * root * std::log(kd) / (epsilon * epsilon)));
}

ApproxLeverage approx_lev_frob(const SpsdMatrix& a, Index k, const FrobOptions& opts,
                               std::uint64_t seed) {
  const Index n = a.n();
  if (k < 1 || k >= n) throw ArgumentError("approx_lev_frob: need 1 <= k < n");
  if (opts.q < 0) throw ArgumentError("approx_lev_frob: q must be nonnegative");
  ApproxLeverage out;
  out.algorithm = LevAlgorithm::frob;
  out.epsilon = opts.epsilon;
  out.q = opts.q;
  out.r1 = std::max(k, opts.r.value_or(frob_width(k, n, opts.epsilon)));
  if (out.r1 > n) {
    out.r1 = n;
    out.fallback_exact = true;
    out.scores = row_norms_squared(a.eigenvectors().leftCols(k));
    return out;
  }
  const SketchMatrix pi = srft_sketch(n, out.r1, derive(seed, kTagPi));
  Matrix b = pi.transpose_apply(a.entries()).transpose();
  normalize(b);
  for (int i = 0; i < 2 * opts.q; ++i) {
    b = a.entries() * b;
    normalize(b);
  }
  out.scores = top_k_left_leverage(b, k);
  return out;
}

ApproxLeverage approx_lev_power(const SpsdMatrix& a, Index k, const PowerOptions& opts,
                                std::uint64_t seed) {
  const Index n = a.n();
  if (k < 1 || k >= n) throw ArgumentError("approx_lev_power: need 1 <= k < n");
  if (!(opts.tol > 0.0)) throw ArgumentError("approx_lev_power: tol must be positive");
  if (opts.max_iters < 1) throw ArgumentError("approx_lev_power: max_iters must be >= 1");

  Matrix start;
  if (opts.start) {
    if (opts.start->rows() != n || opts.start->cols() != k)
      throw ArgumentError("approx_lev_power: start block must be n x k");
    start = *opts.start;
  } else {
    RandomStream rng(derive(seed, kTagPi));
    start = rng.gaussian_matrix(n, k);
  }
  ApproxLeverage out;
  out.algorithm = LevAlgorithm::power;
  out.epsilon = opts.tol;
  out.r1 = k;
  out.converged = false;

  Matrix q = thin_q(a.entries() * start);
  Vector scores = row_norms_squared(q);
  for (int i = 1; i <= opts.max_iters; ++i) {
    q = thin_q(a.entries() * (a.entries() * q));
    Vector next = row_norms_squared(q);
    const double change = (next - scores).cwiseAbs().maxCoeff();
    scores = std::move(next);
    out.iterations_used = i;
    if (change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  out.q = out.iterations_used;
  out.scores = std::move(scores);
  return out;
}

}  // namespace spsd
