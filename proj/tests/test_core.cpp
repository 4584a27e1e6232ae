#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "spsd/core.hpp"
#include "spsd/error.hpp"
#include "spsd/sketching.hpp"

using namespace spsd;
using namespace spsd::test;

namespace {

void expect_chain(const NormTriple& t, Index n) {
  const double slack = 1e-12 * t.trace + 1e-300;
  EXPECT_LE(t.spectral, t.frobenius + slack);
  EXPECT_LE(t.frobenius, t.trace + slack);
  EXPECT_LE(t.trace, std::sqrt(static_cast<double>(n)) * t.frobenius + slack);
  EXPECT_LE(std::sqrt(static_cast<double>(n)) * t.frobenius, static_cast<double>(n) * t.spectral + slack);
}

}  // namespace

TEST(SpsdMatrix, SymmetrizesAndRejectsIndefinite) {
  Matrix m(2, 2);
  m << 2, 1, 0.5, 2;
  SpsdMatrix a(m);
  EXPECT_EQ(a.entries()(0, 1), a.entries()(1, 0));
  EXPECT_DOUBLE_EQ(a.entries()(0, 1), 0.75);

  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(SpsdMatrix{bad}, ArgumentError);
  EXPECT_THROW(SpsdMatrix{Matrix(2, 3)}, ArgumentError);
}

TEST(SpsdMatrix, ClampsTinyNegativeEigenvalues) {
  const SpsdMatrix a(diag({1.0, -1e-12, 0.5}));
  EXPECT_EQ(a.eigenvalues().minCoeff(), 0.0);
  EXPECT_THROW(SpsdMatrix(diag({1.0, -1e-6})), ArgumentError);
}

TEST(SpsdMatrix, DimensionCap) { EXPECT_THROW(SpsdMatrix(Matrix::Identity(5, 5), 1e-10, 4), ArgumentError); }

TEST(Eigendecompose, IdentityIsDegenerate) {
  const SpsdMatrix a(Matrix::Identity(3, 3));
  const EigenPartition e = eigendecompose(a, 1);
  EXPECT_EQ(e.sigma1.size(), 1);
  EXPECT_DOUBLE_EQ(e.sigma1(0), 1.0);
  EXPECT_NEAR(e.sigma2(0), 1.0, 1e-15);
  EXPECT_NEAR(e.sigma2(1), 1.0, 1e-15);
  EXPECT_TRUE(e.degenerate_split);
  Matrix u(3, 3);
  u << e.U1, e.U2;
  Vector s(3);
  s << e.sigma1, e.sigma2;
  EXPECT_LE((u * s.asDiagonal() * u.transpose() - a.entries()).norm(), 1e-10);
}

TEST(Eigendecompose, DiagonalGivesSignedPermutation) {
  const SpsdMatrix a(diag({3, 1, 2}));
  const EigenPartition e = eigendecompose(a, 2);
  EXPECT_DOUBLE_EQ(e.sigma1(0), 3.0);
  EXPECT_DOUBLE_EQ(e.sigma1(1), 2.0);
  EXPECT_DOUBLE_EQ(e.sigma2(0), 1.0);
  EXPECT_FALSE(e.degenerate_split);
  EXPECT_NEAR(std::abs(e.U1(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.U1(2, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.U2(1, 0)), 1.0, 1e-14);
}

TEST(Eigendecompose, TiesFollowOriginalIndex) {
  const SpsdMatrix a(diag({1, 2, 2, 0.5}));
  const EigenPartition e1 = eigendecompose(a, 1);
  const EigenPartition e2 = eigendecompose(a, 1);
  EXPECT_TRUE(e1.degenerate_split);
  EXPECT_EQ(e1.U1, e2.U1);
}

TEST(Eigendecompose, SeededReconstructionAndOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpsdMatrix a = seeded_spsd(8, seed);
    const EigenPartition e = eigendecompose(a, 3);
    Matrix u(8, 8);
    u << e.U1, e.U2;
    Vector s(8);
    s << e.sigma1, e.sigma2;
    EXPECT_LE((u.transpose() * u - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((u * s.asDiagonal() * u.transpose() - a.entries()).norm(), 1e-8 * a.entries().norm());
    EXPECT_GE(e.sigma1.minCoeff(), e.sigma2.maxCoeff());
    EXPECT_LE((s - oracle_eigenvalues(a.entries())).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(eigendecompose(seeded_spsd(4, 1), 0), ArgumentError);
  EXPECT_THROW(eigendecompose(seeded_spsd(4, 1), 4), ArgumentError);
}

TEST(Norms, IdentityAndDiagonal) {
  const NormTriple i4 = norms(SpsdMatrix(Matrix::Identity(4, 4)));
  EXPECT_DOUBLE_EQ(i4.spectral, 1.0);
  EXPECT_DOUBLE_EQ(i4.frobenius, 2.0);
  EXPECT_DOUBLE_EQ(i4.trace, 4.0);
  const NormTriple d = norms(SpsdMatrix(diag({3, 2, 1})));
  EXPECT_DOUBLE_EQ(d.spectral, 3.0);
  EXPECT_NEAR(d.frobenius, std::sqrt(14.0), 1e-14);
  EXPECT_NEAR(d.trace, 6.0, 1e-14);
}

TEST(Norms, ChainOnSeededMatrices) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpsdMatrix a = seeded_spsd(12, seed);
    const NormTriple t = norms(a);
    expect_chain(t, 12);
    const Vector lam = oracle_eigenvalues(a.entries());
    EXPECT_NEAR(t.spectral, lam(0), 1e-12);
    EXPECT_NEAR(t.frobenius, a.entries().norm(), 1e-12);
    EXPECT_NEAR(t.trace, a.entries().trace(), 1e-12);
  }
}

TEST(BestRankK, DiagonalCase) {
  const BestRankK b = best_rank_k(eigendecompose(SpsdMatrix(diag({3, 2, 1})), 2));
  EXPECT_LE((b.approximation.entries() - diag({3, 2, 0})).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_DOUBLE_EQ(b.optimal_errors.spectral, 1.0);
  EXPECT_DOUBLE_EQ(b.optimal_errors.frobenius, 1.0);
  EXPECT_DOUBLE_EQ(b.optimal_errors.trace, 1.0);
}

TEST(BestRankK, ExactRankGivesZero) {
  const SpsdMatrix a = low_rank_spsd(6, 5, 3);
  const NormTriple t = optimal_errors(eigendecompose(a, 5));
  EXPECT_LE(t.trace, 1e-12);
  EXPECT_LE(t.spectral, 1e-12);
}

TEST(BestRankK, MatchesSvdOracleAndDecreasesInK) {
  const SpsdMatrix a = seeded_spsd(10, 7);
  const Vector sv = oracle_singular_values(a.entries());
  const NormTriple t = optimal_errors(eigendecompose(a, 3));
  EXPECT_NEAR(t.spectral, sv(3), 1e-12);
  EXPECT_NEAR(t.frobenius, sv.tail(7).norm(), 1e-12);
  EXPECT_NEAR(t.trace, sv.tail(7).sum(), 1e-12);
  expect_chain(t, 7);

  NormTriple prev = norms(a);
  for (Index k = 1; k < 10; ++k) {
    const NormTriple cur = optimal_errors(eigendecompose(a, k));
    EXPECT_LE(cur.spectral, prev.spectral + 1e-15);
    EXPECT_LE(cur.frobenius, prev.frobenius + 1e-15);
    EXPECT_LE(cur.trace, prev.trace + 1e-15);
    prev = cur;
  }
}

TEST(Leverage, StandardBasisGivesMaximalCoherence) {
  const SpsdMatrix a(diag({5, 4, 1, 1, 1, 1}));
  const LeverageProfile lev = leverage_scores(eigendecompose(a, 2));
  EXPECT_NEAR(lev.scores(0), 1.0, 1e-14);
  EXPECT_NEAR(lev.scores(1), 1.0, 1e-14);
  EXPECT_NEAR(lev.scores.tail(4).sum(), 0.0, 1e-14);
  EXPECT_NEAR(lev.coherence, 3.0, 1e-13);
}

TEST(Leverage, SumBoundsAndBasisInvariance) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpsdMatrix a = seeded_spsd(15, seed);
    const EigenPartition e = eigendecompose(a, 4);
    const LeverageProfile lev = leverage_scores(e);
    EXPECT_NEAR(lev.scores.sum(), 4.0, 4e-8);
    EXPECT_GE(lev.scores.minCoeff(), 0.0);
    EXPECT_LE(lev.scores.maxCoeff(), 1.0 + 1e-12);
    EXPECT_GE(lev.coherence, 1.0 - 1e-12);
    EXPECT_LE(lev.coherence, 15.0 / 4.0 + 1e-12);
    EXPECT_NEAR(lev.coherence, 15.0 / 4.0 * lev.scores.maxCoeff(), 1e-12);

    const Matrix rotated = e.U1 * random_orthogonal(4, seed + 100);
    const LeverageProfile other = leverage_from_basis(rotated);
    EXPECT_LE((other.scores - lev.scores).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(StableRank, Examples) {
  EXPECT_EQ(stable_rank(SpsdMatrix(Matrix::Identity(7, 7))), 7);
  Vector v(4);
  v << 1, -2, 0.5, 3;
  EXPECT_EQ(stable_rank(SpsdMatrix(v * v.transpose())), 1);
  EXPECT_EQ(stable_rank(SpsdMatrix(diag({3, 2, 1}))), 2);
  EXPECT_THROW(stable_rank(SpsdMatrix(Matrix::Zero(3, 3))), ArgumentError);
}

TEST(SqrtProjectionOracle, FullRankSquareSketchReturnsA) {
  const SpsdMatrix a = seeded_spsd(6, 2);
  const SketchMatrix s = SketchMatrix::from_dense(random_orthogonal(6, 9) * diag({1, 2, 3, 1, 2, 3}));
  EXPECT_LE((sqrt_projection_oracle(a, s, 1) - a.entries()).norm(), 1e-10 * a.entries().norm());
}

TEST(SqrtProjectionOracle, RankOneMatrix) {
  Vector v(4);
  v << 2, -1, 0.5, 1;
  const SpsdMatrix a(v * v.transpose());
  const SketchMatrix s = SketchMatrix::from_dense(Matrix::Identity(4, 1));
  EXPECT_LE((sqrt_projection_oracle(a, s, 1) - a.entries()).norm(), 1e-12);
}

TEST(SqrtProjectionOracle, SandwichedBetweenZeroAndA) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SpsdMatrix a = seeded_spsd(12, seed);
    const SketchMatrix s = gaussian_sketch(12, 4, seed);
    for (int q : {1, 2}) {
      const Matrix r = sqrt_projection_oracle(a, s, q);
      const double lmax = a.eigenvalues()(0);
      EXPECT_GE(oracle_eigenvalues(r).minCoeff(), -1e-8 * lmax);
      EXPECT_GE(oracle_eigenvalues(a.entries() - r).minCoeff(), -1e-8 * lmax);
    }
  }
  EXPECT_THROW(sqrt_projection_oracle(seeded_spsd(4, 1), gaussian_sketch(4, 2, 1), 0), ArgumentError);
}
