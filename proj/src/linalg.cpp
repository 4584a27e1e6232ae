#include "spsd/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "spsd/error.hpp"

namespace spsd {

NormTriple norms_from_eigenvalues(const Vector& eigenvalues) {
  NormTriple t;
  if (eigenvalues.size() == 0) return t;
  const Vector a = eigenvalues.cwiseAbs();
  t.spectral = a.maxCoeff();
  t.frobenius = a.norm();
  t.trace = a.sum();
  return t;
}

NormTriple symmetric_norms(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DecompositionError("symmetric eigensolver did not converge");
  return norms_from_eigenvalues(es.eigenvalues());
}

Matrix orthonormal_range(const Matrix& m, double rel_tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const auto& r = qr.matrixQR();
  const Index p = std::min(m.rows(), m.cols());
  const double top = p > 0 ? std::abs(r(0, 0)) : 0.0;
  Index rank = 0;
  while (rank < p && top > 0.0 && std::abs(r(rank, rank)) > rel_tol * top) ++rank;
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
  return q;
}

Matrix pseudoinverse(const Matrix& m, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector inv = Vector::Zero(s.size());
  const double cut = s.size() ? rel_tol * s(0) : 0.0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vector row_norms_squared(const Matrix& m) { return m.rowwise().squaredNorm(); }

}  // namespace spsd
