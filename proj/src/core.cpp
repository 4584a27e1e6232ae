#include "spsd/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spsd/error.hpp"
#include "spsd/sketching.hpp"

namespace spsd {

SpsdMatrix::SpsdMatrix(const Matrix& entries, double psd_tolerance, Index dimension_cap)
    : psd_tolerance_(psd_tolerance) {
  if (entries.rows() != entries.cols())
    throw ArgumentError("SPSD matrix must be square, got " + std::to_string(entries.rows()) +
                        "x" + std::to_string(entries.cols()));
  if (entries.rows() == 0) throw ArgumentError("SPSD matrix must be nonempty");
  if (entries.rows() > dimension_cap)
    throw ArgumentError("dimension " + std::to_string(entries.rows()) + " exceeds the cap " +
                        std::to_string(dimension_cap));
  if (!(psd_tolerance >= 0.0)) throw ArgumentError("psd_tolerance must be nonnegative");
  if (!entries.allFinite()) throw ArgumentError("SPSD matrix has non-finite entries");

  entries_ = 0.5 * (entries + entries.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_);
  if (es.info() != Eigen::Success) throw DecompositionError("symmetric eigensolver did not converge");

  const Index n = entries_.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ev(a) > ev(b); });

  auto eig = std::make_shared<EigenData>();
  eig->values.resize(n);
  eig->vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    eig->values(i) = ev(order[static_cast<std::size_t>(i)]);
    eig->vectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  const double top = std::max(eig->values(0), 0.0);
  const double bottom = eig->values(n - 1);
  if (bottom < -psd_tolerance * top || (top == 0.0 && bottom < 0.0))
    throw ArgumentError("matrix is not positive semi-definite: smallest eigenvalue " +
                        std::to_string(bottom) + ", largest " + std::to_string(top));
  eig->values = eig->values.cwiseMax(0.0);
  eig_ = std::move(eig);
}

SpsdMatrix SpsdMatrix::from_eigen(const Matrix& eigenvectors, const Vector& eigenvalues,
                                  double psd_tolerance) {
  const Index n = eigenvectors.rows();
  if (eigenvectors.cols() != n || eigenvalues.size() != n)
    throw ArgumentError("from_eigen: eigenvector and eigenvalue dimensions disagree");
  for (Index i = 1; i < n; ++i)
    if (eigenvalues(i) > eigenvalues(i - 1))
      throw ArgumentError("from_eigen: eigenvalues must be nonincreasing");
  if (n > 0 && eigenvalues(n - 1) < -psd_tolerance * std::max(eigenvalues(0), 0.0))
    throw ArgumentError("from_eigen: negative eigenvalue beyond tolerance");

  SpsdMatrix m;
  m.psd_tolerance_ = psd_tolerance;
  auto eig = std::make_shared<EigenData>();
  eig->vectors = eigenvectors;
  eig->values = eigenvalues.cwiseMax(0.0);
  const Matrix a = eig->vectors * eig->values.asDiagonal() * eig->vectors.transpose();
  m.entries_ = 0.5 * (a + a.transpose());
  m.eig_ = std::move(eig);
  return m;
}

Matrix SpsdMatrix::power(double p) const {
  if (p < 0.0) throw ArgumentError("SpsdMatrix::power: exponent must be nonnegative");
  Vector d(n());
  for (Index i = 0; i < n(); ++i) d(i) = p == 0.0 ? 1.0 : std::pow(eig_->values(i), p);
  return eig_->vectors * d.asDiagonal() * eig_->vectors.transpose();
}

EigenPartition eigendecompose(const SpsdMatrix& a, Index k) {
  const Index n = a.n();
  if (k < 1 || k >= n)
    throw ArgumentError("eigendecompose: need 1 <= k < n, got k=" + std::to_string(k) +
                        ", n=" + std::to_string(n));
  const Vector& lam = a.eigenvalues();
  const Matrix& u = a.eigenvectors();
  EigenPartition e;
  e.k = k;
  e.U1 = u.leftCols(k);
  e.sigma1 = lam.head(k);
  e.U2 = u.rightCols(n - k);
  e.sigma2 = lam.tail(n - k);
  e.degenerate_split = std::abs(lam(k - 1) - lam(k)) <= 1e-12 * lam(0);
  return e;
}

NormTriple norms(const SpsdMatrix& a) { return norms_from_eigenvalues(a.eigenvalues()); }

NormTriple optimal_errors(const EigenPartition& e) { return norms_from_eigenvalues(e.sigma2); }

BestRankK best_rank_k(const EigenPartition& e) {
  const Index n = e.n();
  Matrix u(n, n);
  u << e.U1, e.U2;
  Vector lam = Vector::Zero(n);
  lam.head(e.k) = e.sigma1;
  return {SpsdMatrix::from_eigen(u, lam), optimal_errors(e)};
}

LeverageProfile leverage_from_basis(const Matrix& basis) {
  LeverageProfile p;
  p.k = basis.cols();
  p.scores = row_norms_squared(basis);
  p.coherence = p.k > 0 ? static_cast<double>(basis.rows()) / static_cast<double>(p.k) *
                              p.scores.maxCoeff()
                        : 0.0;
  return p;
}

LeverageProfile leverage_scores(const EigenPartition& e) { return leverage_from_basis(e.U1); }

Index stable_rank(const SpsdMatrix& a) {
  const NormTriple t = norms(a);
  if (t.spectral == 0.0) throw ArgumentError("stable_rank: zero matrix");
  const double x = (t.frobenius * t.frobenius) / (t.spectral * t.spectral);
  return static_cast<Index>(std::ceil(x * (1.0 - 1e-12)));
}

Matrix sqrt_projection_oracle(const SpsdMatrix& a, const SketchMatrix& s, int q,
                              double rel_tol) {
  if (q < 1) throw ArgumentError("sqrt_projection_oracle: q must be >= 1");
  if (s.n() != a.n()) throw ArgumentError("sqrt_projection_oracle: dimension mismatch");
  if (rel_tol < 0.0)
    rel_tol = std::sqrt(static_cast<double>(s.ell()) * std::numeric_limits<double>::epsilon());

  const Matrix m = a.power(q - 0.5) * s.to_dense();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
  const Matrix half = a.power(0.5);
  const Matrix b = half * svd.matrixU().leftCols(r);
  return b * b.transpose();
}

}  // namespace spsd
