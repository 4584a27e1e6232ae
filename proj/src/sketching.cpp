#include "spsd/sketching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spsd/error.hpp"
#include "spsd/random.hpp"
#include "spsd/transform.hpp"

namespace spsd {
namespace {

// Stream tags for the independent pieces of one sketch.
constexpr std::uint64_t kTagIndices = 1;
constexpr std::uint64_t kTagSigns = 2;
constexpr std::uint64_t kTagGaussian = 3;

std::vector<Index> distinct_indices(Index n, Index ell, RandomStream& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = 0; i < ell; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  perm.resize(static_cast<std::size_t>(ell));
  return perm;
}

void check_distribution(const Vector& p) {
  if (p.size() == 0) throw ArgumentError("sampling distribution is empty");
  if (!p.allFinite() || p.minCoeff() < 0.0)
    throw ArgumentError("sampling distribution must be finite and nonnegative");
  if (!(p.sum() > 0.0)) throw ArgumentError("sampling distribution is identically zero");
}

}  // namespace

std::string_view to_string(SketchMethod m) {
  switch (m) {
    case SketchMethod::uniform: return "uniform";
    case SketchMethod::leverage: return "leverage";
    case SketchMethod::gaussian: return "gaussian";
    case SketchMethod::srft: return "srft";
  }
  return "unknown";
}

SketchMatrix SketchMatrix::sampling(Index n, std::vector<Index> rows, std::vector<double> scales,
                                    SketchMethod method, std::uint64_t seed, bool replacement) {
  if (rows.size() != scales.size()) throw ArgumentError("sampling sketch: rows/scales mismatch");
  for (Index r : rows)
    if (r < 0 || r >= n) throw ArgumentError("sampling sketch: row index out of range");
  SketchMatrix s;
  s.n_ = n;
  s.ell_ = static_cast<Index>(rows.size());
  s.method_ = method;
  s.seed_ = seed;
  s.replacement_ = replacement;
  s.rows_ = std::move(rows);
  s.scales_ = std::move(scales);
  return s;
}

SketchMatrix SketchMatrix::dense(Matrix entries, SketchMethod method, std::uint64_t seed) {
  SketchMatrix s;
  s.n_ = entries.rows();
  s.ell_ = entries.cols();
  s.method_ = method;
  s.seed_ = seed;
  s.dense_ = std::move(entries);
  return s;
}

SketchMatrix SketchMatrix::from_dense(Matrix entries) {
  return dense(std::move(entries), SketchMethod::gaussian, 0);
}

SketchMatrix SketchMatrix::srft(Index n, Vector signs, std::vector<Index> columns,
                                std::uint64_t seed) {
  if (signs.size() != n) throw ArgumentError("srft sketch: sign vector has wrong length");
  for (Index c : columns)
    if (c < 0 || c >= n) throw ArgumentError("srft sketch: column index out of range");
  SketchMatrix s;
  s.n_ = n;
  s.ell_ = static_cast<Index>(columns.size());
  s.method_ = SketchMethod::srft;
  s.seed_ = seed;
  s.signs_ = std::move(signs);
  s.rows_ = std::move(columns);
  return s;
}

Matrix SketchMatrix::to_dense() const {
  if (is_sampling()) {
    Matrix d = Matrix::Zero(n_, ell_);
    for (Index t = 0; t < ell_; ++t)
      d(rows_[static_cast<std::size_t>(t)], t) += scales_[static_cast<std::size_t>(t)];
    return d;
  }
  if (method_ == SketchMethod::srft && dense_.size() == 0) {
    const Matrix t = dct_matrix(n_);
    const double scale = std::sqrt(static_cast<double>(n_) / static_cast<double>(ell_));
    Matrix d(n_, ell_);
    for (Index c = 0; c < ell_; ++c)
      d.col(c) = scale * signs_.cwiseProduct(t.col(rows_[static_cast<std::size_t>(c)]));
    return d;
  }
  return dense_;
}

Matrix SketchMatrix::transpose_apply(const Matrix& x) const {
  if (x.rows() != n_)
    throw ArgumentError("sketch transpose_apply: expected " + std::to_string(n_) + " rows, got " +
                        std::to_string(x.rows()));
  if (is_sampling()) {
    Matrix y(ell_, x.cols());
    for (Index t = 0; t < ell_; ++t)
      y.row(t) = scales_[static_cast<std::size_t>(t)] * x.row(rows_[static_cast<std::size_t>(t)]);
    return y;
  }
  if (method_ == SketchMethod::srft && dense_.size() == 0) {
    const Matrix z = dct_transpose(signs_.asDiagonal() * x);
    const double scale = std::sqrt(static_cast<double>(n_) / static_cast<double>(ell_));
    Matrix y(ell_, x.cols());
    for (Index t = 0; t < ell_; ++t) y.row(t) = scale * z.row(rows_[static_cast<std::size_t>(t)]);
    return y;
  }
  return dense_.transpose() * x;
}

Matrix SketchMatrix::right_apply(const Matrix& x) const {
  if (x.cols() != n_)
    throw ArgumentError("sketch right_apply: expected " + std::to_string(n_) + " columns, got " +
                        std::to_string(x.cols()));
  if (is_sampling()) {
    Matrix y(x.rows(), ell_);
    for (Index t = 0; t < ell_; ++t)
      y.col(t) = scales_[static_cast<std::size_t>(t)] * x.col(rows_[static_cast<std::size_t>(t)]);
    return y;
  }
  if (method_ == SketchMethod::srft && dense_.size() == 0)
    return transpose_apply(x.transpose()).transpose();
  return x * dense_;
}

SamplingDistribution leverage_distribution(const LeverageProfile& lev) {
  if (lev.k < 1) throw ArgumentError("leverage_distribution: k must be positive");
  SamplingDistribution d;
  d.p = lev.scores / lev.scores.sum();
  d.beta = 1.0;
  return d;
}

SamplingDistribution distribution_from_scores(const Vector& scores, double beta) {
  check_distribution(scores);
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("beta must lie in (0, 1]");
  const double floor = kScoreFloor / static_cast<double>(scores.size());
  SamplingDistribution d;
  d.p = scores.cwiseMax(floor);
  d.p /= d.p.sum();
  d.beta = beta;
  return d;
}

double certified_beta(const SamplingDistribution& dist, const LeverageProfile& lev) {
  if (dist.p.size() != lev.scores.size())
    throw ArgumentError("certified_beta: length mismatch");
  double beta = 1.0;
  for (Index j = 0; j < dist.p.size(); ++j)
    if (lev.scores(j) > 0.0)
      beta = std::min(beta, dist.p(j) * static_cast<double>(lev.k) / lev.scores(j));
  return beta;
}

SketchMatrix uniform_sketch(Index n, Index ell, bool replacement, std::uint64_t seed) {
  if (n < 1 || ell < 1) throw ArgumentError("uniform_sketch: n and ell must be positive");
  if (!replacement && ell > n)
    throw ArgumentError("uniform_sketch: ell=" + std::to_string(ell) + " exceeds n=" +
                        std::to_string(n) + " without replacement");
  RandomStream rng = RandomStream(seed).substream(kTagIndices);
  std::vector<Index> rows;
  if (replacement) {
    rows.resize(static_cast<std::size_t>(ell));
    for (auto& r : rows) r = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  } else {
    rows = distinct_indices(n, ell, rng);
  }
  return SketchMatrix::sampling(n, std::move(rows),
                                std::vector<double>(static_cast<std::size_t>(ell), 1.0),
                                SketchMethod::uniform, seed, replacement);
}

SketchMatrix leverage_sketch(const SamplingDistribution& dist, Index ell, std::uint64_t seed) {
  check_distribution(dist.p);
  if (ell < 1) throw ArgumentError("leverage_sketch: ell must be positive");
  const Index n = dist.p.size();
  const Vector p = dist.p / dist.p.sum();
  std::vector<double> cdf(static_cast<std::size_t>(n));
  std::partial_sum(p.data(), p.data() + n, cdf.begin());
  const double total = cdf.back();

  RandomStream rng = RandomStream(seed).substream(kTagIndices);
  std::vector<Index> rows(static_cast<std::size_t>(ell));
  std::vector<double> scales(static_cast<std::size_t>(ell));
  for (Index t = 0; t < ell; ++t) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) it = std::prev(cdf.end());
    auto i = static_cast<Index>(it - cdf.begin());
    // Never land on a zero-probability entry.
    while (p(i) == 0.0) --i;
    rows[static_cast<std::size_t>(t)] = i;
    scales[static_cast<std::size_t>(t)] = 1.0 / std::sqrt(static_cast<double>(ell) * p(i));
  }
  return SketchMatrix::sampling(n, std::move(rows), std::move(scales), SketchMethod::leverage,
                                seed, true);
}

SketchMatrix gaussian_sketch(Index n, Index ell, std::uint64_t seed) {
  if (n < 1 || ell < 1) throw ArgumentError("gaussian_sketch: n and ell must be positive");
  RandomStream rng = RandomStream(seed).substream(kTagGaussian);
  return SketchMatrix::dense(rng.gaussian_matrix(n, ell), SketchMethod::gaussian, seed);
}

SketchMatrix srft_sketch(Index n, Index ell, std::uint64_t seed) {
  if (n < 1 || ell < 1) throw ArgumentError("srft_sketch: n and ell must be positive");
  if (ell > n)
    throw ArgumentError("srft_sketch: ell=" + std::to_string(ell) + " exceeds n=" +
                        std::to_string(n));
  const RandomStream base(seed);
  RandomStream sign_rng = base.substream(kTagSigns);
  Vector signs(n);
  for (Index i = 0; i < n; ++i) signs(i) = sign_rng.rademacher();
  RandomStream idx_rng = base.substream(kTagIndices);
  return SketchMatrix::srft(n, std::move(signs), distinct_indices(n, ell, idx_rng), seed);
}

}  // namespace spsd
