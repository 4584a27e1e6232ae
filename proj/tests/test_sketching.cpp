#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "spsd/error.hpp"
#include "spsd/random.hpp"
#include "spsd/sketching.hpp"

using namespace spsd;
using namespace spsd::test;

namespace {

void expect_one_nonzero_per_column(const Matrix& s) {
  for (Index j = 0; j < s.cols(); ++j) EXPECT_EQ((s.col(j).array() != 0.0).count(), 1) << j;
}

}  // namespace

TEST(UniformSketch, FullPermutation) {
  const SketchMatrix s = uniform_sketch(9, 9, false, 4);
  const Matrix d = s.to_dense();
  EXPECT_LE((d.transpose() * d - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff(), 0.0);
  expect_one_nonzero_per_column(d);
  EXPECT_EQ(d.maxCoeff(), 1.0);
  EXPECT_EQ(s.method(), SketchMethod::uniform);
  EXPECT_FALSE(s.replacement());
}

TEST(UniformSketch, DistinctWithoutReplacementAndUnitEntries) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SketchMatrix s = uniform_sketch(30, 12, false, seed);
    const std::set<Index> rows(s.sample_rows().begin(), s.sample_rows().end());
    EXPECT_EQ(rows.size(), 12u);
    for (double v : s.sample_scales()) EXPECT_EQ(v, 1.0);
  }
  const SketchMatrix w = uniform_sketch(5, 20, true, 1);
  EXPECT_EQ(w.ell(), 20);
  expect_one_nonzero_per_column(w.to_dense());
  EXPECT_THROW(uniform_sketch(5, 6, false, 1), ArgumentError);
}

TEST(UniformSketch, ColumnFrequencies) {
  const int draws = 10000;
  std::vector<int> counts(10, 0);
  for (int seed = 0; seed < draws; ++seed) ++counts[static_cast<std::size_t>(uniform_sketch(10, 1, false, seed).sample_rows()[0])];
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (int c : counts) EXPECT_LE(std::abs(c - draws * 0.1), 4.0 * sigma);
}

TEST(LeverageSketch, UniformProbabilitiesGiveConstantScale) {
  SamplingDistribution dist{Vector::Constant(8, 1.0 / 8.0), 1.0};
  const SketchMatrix s = leverage_sketch(dist, 5, 3);
  EXPECT_TRUE(s.replacement());
  for (double v : s.sample_scales()) EXPECT_NEAR(v, std::sqrt(8.0 / 5.0), 1e-15);
}

TEST(LeverageSketch, PointMass) {
  SamplingDistribution dist{Vector::Zero(4), 1.0};
  dist.p(0) = 1.0;
  const Matrix s = leverage_sketch(dist, 3, 9).to_dense();
  Matrix expected = Matrix::Zero(4, 3);
  expected.row(0).setConstant(1.0 / std::sqrt(3.0));
  EXPECT_LE((s - expected).cwiseAbs().maxCoeff(), 1e-15);

  SamplingDistribution zero{Vector::Zero(4), 1.0};
  EXPECT_THROW(leverage_sketch(zero, 2, 1), ArgumentError);
}

TEST(LeverageSketch, UnbiasedOuterProduct) {
  Vector p(8);
  p << 0.3, 0.2, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05;
  const SamplingDistribution dist{p, 1.0};
  Matrix acc = Matrix::Zero(8, 8);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Matrix s = leverage_sketch(dist, 4, t).to_dense();
    acc += s * s.transpose();
  }
  EXPECT_LE((acc / trials - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(GaussianSketch, ShapeMomentsAndIsotropy) {
  const SketchMatrix s = gaussian_sketch(6, 3, 2);
  const Matrix d = s.to_dense();
  EXPECT_EQ(d.rows(), 6);
  EXPECT_EQ(d.cols(), 3);
  EXPECT_EQ((d.array() == 0.0).count(), 0);

  const Matrix big = gaussian_sketch(1000, 100, 5).to_dense();
  const double mean = big.mean();
  const double var = (big.array() - mean).square().sum() / static_cast<double>(big.size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.03);

  Matrix acc = Matrix::Zero(8, 8);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Matrix g = gaussian_sketch(8, 4, t).to_dense();
    acc += g * g.transpose() / 4.0;
  }
  EXPECT_LE((acc / trials - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SrftSketch, ColumnNormsAndTrace) {
  for (Index n : {8, 13, 64}) {
    const Index ell = n / 2;
    const Matrix s = srft_sketch(n, ell, 17).to_dense();
    for (Index j = 0; j < ell; ++j)
      EXPECT_NEAR(s.col(j).norm(), std::sqrt(static_cast<double>(n) / ell), 1e-12);
    EXPECT_NEAR((s.transpose() * s).trace(), static_cast<double>(n), 1e-10);
  }
  EXPECT_THROW(srft_sketch(4, 5, 1), ArgumentError);
}

TEST(SrftSketch, UnbiasedOuterProduct) {
  Matrix acc = Matrix::Zero(16, 16);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Matrix s = srft_sketch(16, 8, t).to_dense();
    acc += s * s.transpose();
  }
  EXPECT_LE((acc / trials - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SketchMatrix, ApplyMatchesDense) {
  RandomStream rng(21);
  const Matrix x = rng.gaussian_matrix(20, 20);
  SamplingDistribution dist{Vector::Constant(20, 0.05), 1.0};
  for (const SketchMatrix& s : {uniform_sketch(20, 6, false, 1), leverage_sketch(dist, 6, 2),
                                gaussian_sketch(20, 6, 3), srft_sketch(20, 6, 4)}) {
    const Matrix d = s.to_dense();
    EXPECT_LE((s.right_apply(x) - x * d).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((s.transpose_apply(x) - d.transpose() * x).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(gaussian_sketch(20, 6, 3).transpose_apply(Matrix::Zero(19, 2)), ArgumentError);
}

TEST(SketchMatrix, BitIdenticalReconstruction) {
  SamplingDistribution dist{Vector::Constant(30, 1.0 / 30.0), 1.0};
  EXPECT_EQ(uniform_sketch(30, 7, false, 99).to_dense(), uniform_sketch(30, 7, false, 99).to_dense());
  EXPECT_EQ(uniform_sketch(30, 7, true, 99).to_dense(), uniform_sketch(30, 7, true, 99).to_dense());
  EXPECT_EQ(leverage_sketch(dist, 7, 99).to_dense(), leverage_sketch(dist, 7, 99).to_dense());
  EXPECT_EQ(gaussian_sketch(30, 7, 99).to_dense(), gaussian_sketch(30, 7, 99).to_dense());
  EXPECT_EQ(srft_sketch(30, 7, 99).to_dense(), srft_sketch(30, 7, 99).to_dense());
  EXPECT_NE(gaussian_sketch(30, 7, 99).to_dense(), gaussian_sketch(30, 7, 100).to_dense());
}

TEST(Distributions, LeverageAndFloor) {
  const LeverageProfile lev = leverage_scores(eigendecompose(seeded_spsd(12, 3), 3));
  const SamplingDistribution d = leverage_distribution(lev);
  EXPECT_NEAR(d.p.sum(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(d.beta, 1.0);
  EXPECT_NEAR(certified_beta(d, lev), 1.0, 1e-12);

  Vector scores = Vector::Zero(5);
  scores(2) = 1.0;
  const SamplingDistribution f = distribution_from_scores(scores);
  EXPECT_NEAR(f.p.sum(), 1.0, 1e-12);
  EXPECT_GT(f.p.minCoeff(), 0.0);
  EXPECT_THROW(distribution_from_scores(scores, 0.0), ArgumentError);
}

TEST(Distributions, PerturbedScoresAreBetaCertified) {
  const LeverageProfile lev = leverage_scores(eigendecompose(seeded_spsd(40, 8), 5));
  const double eps = 0.3;
  RandomStream rng(1);
  Vector approx = lev.scores;
  for (Index i = 0; i < approx.size(); ++i) approx(i) *= 1.0 + eps * (2.0 * rng.uniform() - 1.0);
  const SamplingDistribution d = distribution_from_scores(approx, (1 - eps) / (1 + eps));
  EXPECT_GE(certified_beta(d, lev), (1 - eps) / (1 + eps) - 1e-12);
  const SketchMatrix s = leverage_sketch(d, 10, 2);
  for (double v : s.sample_scales()) EXPECT_TRUE(std::isfinite(v));
}
