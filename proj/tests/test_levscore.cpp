#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "spsd/error.hpp"
#include "spsd/levscore.hpp"
#include "spsd/random.hpp"
#include "spsd/sketching.hpp"

using namespace spsd;
using namespace spsd::test;

namespace {

Matrix orthonormal_columns(Index n, Index d, std::uint64_t seed) {
  RandomStream rng(seed, 0x51);
  return oracle_orthonormal(rng.gaussian_matrix(n, d));
}

bool within_relative(const Vector& approx, const Vector& exact, double eps) {
  return ((approx - exact).cwiseAbs().array() <= eps * exact.array() + 1e-15).all();
}

double inf_dev(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

// A = U diag(10, 10, 1, ..., 1) V^T with random orthonormal U (n x d) and V (d x d).
Matrix two_spike(Index n, Index d, std::uint64_t seed, Vector* exact) {
  const Matrix u = orthonormal_columns(n, d, seed);
  const Matrix v = orthonormal_columns(d, d, seed + 1000);
  Vector s = Vector::Ones(d);
  s.head(2).setConstant(10.0);
  *exact = u.leftCols(2).rowwise().squaredNorm();
  return u * s.asDiagonal() * v.transpose();
}

Vector exact_top_k(const SpsdMatrix& a, Index k) { return leverage_scores(eigendecompose(a, k)).scores; }

}  // namespace

TEST(TallParameters, MatchClosedForms) {
  const double n = 4096, d = 8, eps = 0.5, delta = 0.1;
  const double root = std::sqrt(d) + std::sqrt(std::log(n / delta));
  EXPECT_EQ(tall_r1(4096, 8, eps, delta), static_cast<Index>(std::ceil(std::log(d / delta) * root * root / (eps * eps))));
  EXPECT_EQ(tall_r2(4096, eps, delta), static_cast<Index>(std::ceil((std::log(n) + std::log(1 / delta)) / (eps * eps))));
  EXPECT_THROW(tall_r1(10, 2, 0.0, 0.1), ArgumentError);
  EXPECT_THROW(tall_r2(10, 0.5, 1.5), ArgumentError);
}

TEST(ApproxLevTall, OrthonormalColumnsSmall) {
  // r1 exceeds n = 256 at eps = 0.5, so the scores come from the exact path.
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix x = orthonormal_columns(256, 8, seed);
    TallOptions o;
    o.epsilon = 0.5;
    const ApproxLeverage lev = approx_lev_tall(x, o, seed);
    EXPECT_TRUE(lev.fallback_exact);
    good += within_relative(lev.scores, x.rowwise().squaredNorm(), 0.5);
  }
  EXPECT_GE(good, 8);
}

TEST(ApproxLevTall, OrthonormalColumnsSketched) {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix x = orthonormal_columns(4096, 8, seed);
    TallOptions o;
    o.epsilon = 0.5;
    const ApproxLeverage lev = approx_lev_tall(x, o, seed);
    EXPECT_FALSE(lev.fallback_exact);
    EXPECT_EQ(lev.scores.size(), 4096);
    EXPECT_GE(lev.scores.minCoeff(), 0.0);
    good += within_relative(lev.scores, x.rowwise().squaredNorm(), 0.5);
  }
  EXPECT_GE(good, 8);
}

TEST(ApproxLevTall, ZeroRowsScoreZero) {
  Matrix x = Matrix::Zero(2048, 4);
  x.topRows(4).setIdentity();
  TallOptions o;
  const ApproxLeverage lev = approx_lev_tall(x, o, 3);
  EXPECT_FALSE(lev.fallback_exact);
  EXPECT_EQ(lev.scores.tail(2044).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(lev.scores.head(4).minCoeff(), 0.0);
}

TEST(ApproxLevTall, RankDeficientInput) {
  Matrix x = orthonormal_columns(2048, 3, 4);
  Matrix wide(2048, 4);
  wide << x, x.col(0) + x.col(1);
  TallOptions o;
  const ApproxLeverage lev = approx_lev_tall(wide, o, 1);
  EXPECT_TRUE(lev.rank_deficient);
  EXPECT_TRUE(lev.scores.allFinite());
  EXPECT_NEAR(lev.scores.sum(), 3.0, 0.6);
}

TEST(ApproxLevTall, ErrorShrinksWithEpsilon) {
  std::vector<double> medians;
  for (double eps : {1.0, 0.5, 0.25}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Matrix x = orthonormal_columns(4096, 8, seed);
      TallOptions o;
      o.epsilon = eps;
      const Vector exact = x.rowwise().squaredNorm();
      const Vector approx = approx_lev_tall(x, o, seed).scores;
      errs.push_back(((approx - exact).cwiseQuotient(exact)).cwiseAbs().maxCoeff());
    }
    medians.push_back(median(errs));
  }
  EXPECT_GE(medians[0], medians[1]);
  EXPECT_GE(medians[1], medians[2]);
}

TEST(ApproxLevTall, Deterministic) {
  const Matrix x = orthonormal_columns(2048, 5, 2);
  TallOptions o;
  EXPECT_EQ(approx_lev_tall(x, o, 7).scores, approx_lev_tall(x, o, 7).scores);
  EXPECT_THROW(approx_lev_tall(Matrix::Zero(3, 3), o, 1), ArgumentError);
}

TEST(SpectralPowerCount, ClosedFormAndRejections) {
  const double k = 2, m = 64, eps = 3.0;
  const double expected = std::ceil(std::log(1 + std::sqrt(k / (k - 1)) + std::numbers::e * std::sqrt(2 / k) * std::sqrt(m - k)) /
                                    (2 * std::log(1 + eps / 10) - 0.5));
  EXPECT_EQ(spectral_power_count(1024, 64, 2, eps), static_cast<int>(expected));
  EXPECT_THROW(spectral_power_count(1024, 64, 2, 0.5), ArgumentError);
  EXPECT_THROW(spectral_power_count(1024, 64, 1, 3.0), ArgumentError);
}

TEST(ApproxLevSpectral, TwoSpikeMatrix) {
  // B has 2k columns, so its scores are those of a 2k-dimensional range that
  // nearly contains the top-k subspace: they dominate the exact rank-k scores
  // and sum to about 2k rather than k.
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Vector exact;
    const Matrix a = two_spike(1024, 64, seed, &exact);
    SpectralOptions o;
    o.epsilon = 0.5;
    o.q = 3;
    const ApproxLeverage lev = approx_lev_spectral(a, 2, o, seed);
    EXPECT_EQ(lev.q, 3);
    EXPECT_GE(lev.scores.minCoeff(), 0.0);
    EXPECT_NEAR(lev.scores.sum(), 4.0, 0.5 * 4.0);
    good += ((lev.scores.array() >= 0.5 * exact.array()).all());
  }
  EXPECT_GE(good, 8);
  Vector exact;
  SpectralOptions o;
  EXPECT_THROW(approx_lev_spectral(two_spike(1024, 64, 1, &exact), 2, o, 1), ArgumentError);
}

TEST(ApproxLevSpectral, ExactRankSumsToK) {
  const Matrix u = orthonormal_columns(1024, 2, 9);
  const Matrix v = orthonormal_columns(48, 2, 10);
  const Matrix a = u * Vector::Constant(2, 3.0).asDiagonal() * v.transpose();
  SpectralOptions o;
  o.q = 1;
  const ApproxLeverage lev = approx_lev_spectral(a, 2, o, 4);
  EXPECT_NEAR(lev.scores.sum(), 2.0, 0.2);
  EXPECT_EQ(lev.scores.size(), 1024);
}

TEST(FrobWidth, ClosedForm) {
  const double k = 4, d = 200, eps = 0.5;
  const double root = std::sqrt(k) + std::sqrt(8 * std::log(k * d));
  EXPECT_EQ(frob_width(4, 200, eps), static_cast<Index>(std::ceil(36 * root * root * std::log(k) / (eps * eps))));
}

TEST(ApproxLevFrob, GapHundredPlainSketch) {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpsdMatrix a = gapped_spsd(200, 4, 100.0, seed);
    FrobOptions o;
    o.r = 8;
    const ApproxLeverage lev = approx_lev_frob(a, 4, o, seed);
    EXPECT_FALSE(lev.fallback_exact);
    EXPECT_NEAR(lev.scores.sum(), 4.0, 1e-6);
    good += inf_dev(lev.scores, exact_top_k(a, 4)) <= 0.1;
  }
  EXPECT_GE(good, 8);
}

TEST(ApproxLevFrob, PowerStepsReduceDeviation) {
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpsdMatrix a = gapped_spsd(200, 4, 100.0, seed);
    const Vector exact = exact_top_k(a, 4);
    FrobOptions plain, powered;
    plain.r = powered.r = 8;
    powered.q = 3;
    improved += inf_dev(approx_lev_frob(a, 4, powered, seed).scores, exact) <
                inf_dev(approx_lev_frob(a, 4, plain, seed).scores, exact);
  }
  EXPECT_GE(improved, 8);
}

TEST(ApproxLevFrob, WidthBeyondNFallsBack) {
  const SpsdMatrix a = gapped_spsd(50, 3, 10.0, 1);
  FrobOptions o;
  const ApproxLeverage lev = approx_lev_frob(a, 3, o, 1);
  EXPECT_TRUE(lev.fallback_exact);
  EXPECT_LE(inf_dev(lev.scores, exact_top_k(a, 3)), 1e-12);
  o.r = 1;
  EXPECT_EQ(approx_lev_frob(a, 3, o, 1).r1, 3);
}

TEST(ApproxLevPower, FastConvergenceOnGap) {
  int fast = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpsdMatrix a = gapped_spsd(200, 2, 100.0, seed);
    const ApproxLeverage lev = approx_lev_power(a, 2, PowerOptions{}, seed);
    EXPECT_TRUE(lev.converged);
    EXPECT_LE(inf_dev(lev.scores, exact_top_k(a, 2)), 5 * 1e-2);
    fast += lev.iterations_used <= 3;
  }
  EXPECT_GE(fast, 8);
}

TEST(ApproxLevPower, FixedPointStart) {
  const SpsdMatrix a = gapped_spsd(60, 3, 50.0, 2);
  PowerOptions o;
  o.start = eigendecompose(a, 3).U1;
  const ApproxLeverage lev = approx_lev_power(a, 3, o, 1);
  EXPECT_LE(lev.iterations_used, 1);
  EXPECT_TRUE(lev.converged);
}

TEST(ApproxLevPower, IterationCapReportsNoConvergence) {
  const SpsdMatrix a(Matrix::Identity(30, 30) + 1e-3 * seeded_spsd(30, 1).entries());
  PowerOptions o;
  o.tol = 1e-14;
  o.max_iters = 2;
  const ApproxLeverage lev = approx_lev_power(a, 3, o, 5);
  EXPECT_FALSE(lev.converged);
  EXPECT_EQ(lev.iterations_used, 2);
}

TEST(ApproxLeverage, AccuracyImprovesWithGap) {
  for (int algo = 0; algo < 2; ++algo) {
    std::vector<double> medians;
    for (double gap : {1.0, 10.0, 100.0}) {
      std::vector<double> devs;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SpsdMatrix a = gapped_spsd(120, 3, gap, seed);
        Vector approx;
        if (algo == 0) {
          FrobOptions o;
          o.r = 6;
          approx = approx_lev_frob(a, 3, o, seed).scores;
        } else {
          approx = approx_lev_power(a, 3, PowerOptions{}, seed).scores;
        }
        devs.push_back(inf_dev(approx, exact_top_k(a, 3)));
      }
      medians.push_back(median(devs));
    }
    EXPECT_GE(medians[0], medians[1]) << algo;
    EXPECT_GE(medians[1], medians[2]) << algo;
  }
}

TEST(ApproxLeverage, DeterministicNonnegativeAndCertifiable) {
  const SpsdMatrix a = gapped_spsd(80, 3, 20.0, 3);
  FrobOptions f;
  f.r = 6;
  EXPECT_EQ(approx_lev_frob(a, 3, f, 2).scores, approx_lev_frob(a, 3, f, 2).scores);
  EXPECT_EQ(approx_lev_power(a, 3, PowerOptions{}, 2).scores, approx_lev_power(a, 3, PowerOptions{}, 2).scores);

  const LeverageProfile exact = leverage_scores(eigendecompose(a, 3));
  const ApproxLeverage lev = approx_lev_power(a, 3, PowerOptions{}, 2);
  EXPECT_GE(lev.scores.minCoeff(), 0.0);
  const double eps = (lev.scores - exact.scores).cwiseQuotient(exact.scores).cwiseAbs().maxCoeff();
  if (eps < 1.0) {
    const SamplingDistribution d = distribution_from_scores(lev.scores, (1 - eps) / (1 + eps));
    EXPECT_NEAR(d.p.sum(), 1.0, 1e-12);
    EXPECT_GE(certified_beta(d, exact), (1 - eps) / (1 + eps) - 1e-12);
  }
}
