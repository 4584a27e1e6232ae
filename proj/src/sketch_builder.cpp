#include "spsd/sketch_builder.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spsd/error.hpp"

namespace spsd {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Beyond this many products by A the columns of A^j S collapse onto the top
// eigenvector in floating point, so the iterates are re-orthonormalized.
constexpr int kMaxUnstabilizedQ = 3;

double default_qr_tolerance(Index ell) { return std::sqrt(static_cast<double>(ell) * kEps); }

// A * S for symmetric A, using the sketch's structured transpose product.
Matrix apply_right(const SpsdMatrix& a, const SketchMatrix& s) {
  return s.transpose_apply(a.entries()).transpose();
}

struct SymEig {
  Matrix vectors;
  Vector values;  // descending
};

SymEig sym_eig_desc(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw DecompositionError("symmetric eigensolver did not converge");
  return {es.eigenvectors().rowwise().reverse(), es.eigenvalues().reverse()};
}

}  // namespace

std::string_view to_string(ApproxMode m) {
  switch (m) {
    case ApproxMode::full: return "full";
    case ApproxMode::rank_restricted: return "rank_restricted";
    case ApproxMode::pinched: return "pinched";
    case ApproxMode::prolonged: return "prolonged";
  }
  return "unknown";
}

double SpsdSketch::effective_pinv_tolerance() const {
  return pinv_tolerance >= 0.0 ? pinv_tolerance : static_cast<double>(W.rows()) * kEps;
}

SpsdSketch build(const SpsdMatrix& a, const SketchMatrix& s, int q, double pinv_tolerance) {
  if (q < 1) throw ArgumentError("build: q must be >= 1, got " + std::to_string(q));
  if (s.n() != a.n())
    throw ArgumentError("build: sketch has " + std::to_string(s.n()) + " rows but A is " +
                        std::to_string(a.n()) + "x" + std::to_string(a.n()));
  SpsdSketch sk;
  sk.q = q;
  sk.source_method = s.method();
  sk.pinv_tolerance = pinv_tolerance;

  if (q == 1) {
    sk.C = apply_right(a, s);
    sk.W = s.transpose_apply(sk.C);
  } else if (q <= kMaxUnstabilizedQ) {
    Matrix y = apply_right(a, s);  // A^j S
    for (int j = 2; j < q; ++j) y = a.entries() * y;
    sk.C = a.entries() * y;
    sk.W = y.transpose() * sk.C;
  } else {
    const double tol = default_qr_tolerance(s.ell());
    Matrix z = orthonormal_range(apply_right(a, s), tol);
    for (int j = 2; j < q; ++j) z = orthonormal_range(a.entries() * z, tol);
    sk.C = a.entries() * z;
    sk.W = z.transpose() * sk.C;
    sk.stabilized = true;
  }
  sk.W = (0.5 * (sk.W + sk.W.transpose())).eval();
  return sk;
}

Approximation approximate(const SpsdSketch& sk, ApproxMode mode, std::optional<Index> k) {
  if (mode != ApproxMode::full && mode != ApproxMode::rank_restricted)
    throw ArgumentError("approximate: pinched and prolonged need A and S, use pinched()/prolonged()");
  if (mode == ApproxMode::rank_restricted && (!k || *k < 1))
    throw ArgumentError("approximate: rank_restricted mode needs k >= 1");
  if (sk.W.rows() == 0) throw DegenerateSketchError("approximate: empty sketch");

  const SymEig e = sym_eig_desc(sk.W);
  const double top = e.values(0);
  if (!(top > 0.0) || !std::isfinite(top))
    throw DegenerateSketchError("approximate: W is numerically zero");
  const double cut = sk.effective_pinv_tolerance() * top;
  Index r = 0;
  while (r < e.values.size() && e.values(r) > cut) ++r;
  if (mode == ApproxMode::rank_restricted) r = std::min(r, *k);

  Approximation out;
  out.mode = mode;
  out.rank_bound = mode == ApproxMode::rank_restricted ? *k : sk.W.rows();
  out.L = sk.C * e.vectors.leftCols(r) *
          e.values.head(r).cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

Approximation pinched(const SpsdMatrix& a, const SketchMatrix& s, double rel_tol) {
  if (s.n() != a.n()) throw ArgumentError("pinched: dimension mismatch");
  if (rel_tol < 0.0) rel_tol = default_qr_tolerance(s.ell());
  const Matrix q = orthonormal_range(apply_right(a, s), rel_tol);
  const SymEig e = sym_eig_desc(q.transpose() * a.entries() * q);
  Approximation out;
  out.mode = ApproxMode::pinched;
  out.rank_bound = q.cols();
  out.rank_deficient = q.cols() < s.ell();
  out.L = q * e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return out;
}

Approximation prolonged(const SpsdMatrix& a, const SketchMatrix& s, double rel_tol) {
  if (s.n() != a.n()) throw ArgumentError("prolonged: dimension mismatch");
  if (rel_tol < 0.0) rel_tol = default_qr_tolerance(s.ell());
  const Matrix q = orthonormal_range(apply_right(a, s), rel_tol);
  const Matrix aq = a.entries() * q;
  const SymEig e = sym_eig_desc(q.transpose() * aq);
  Approximation out;
  out.mode = ApproxMode::prolonged;
  out.rank_bound = q.cols();
  out.rank_deficient = q.cols() < s.ell();
  if (q.cols() == 0 || !(e.values(0) > 0.0)) {
    out.L = Matrix::Zero(a.n(), 0);
    return out;
  }
  const double cut = static_cast<double>(q.cols()) * kEps * e.values(0);
  Index r = 0;
  while (r < e.values.size() && e.values(r) > cut) ++r;
  out.L = aq * e.vectors.leftCols(r) * e.values.head(r).cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

}  // namespace spsd
