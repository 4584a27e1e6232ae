#pragma once

#include <optional>

#include "spsd/core.hpp"
#include "spsd/sketching.hpp"

namespace spsd {

/// C = A^q S and W = S^T A^{2q-1} S.
struct SpsdSketch {
  Matrix C;
  Matrix W;
  int q = 1;
  SketchMethod source_method = SketchMethod::gaussian;
  /// Relative eigenvalue cutoff for W; a negative value means ell * machine epsilon.
  double pinv_tolerance = -1.0;
  /// True when q > 3 and the power iterates were re-orthonormalized. C and W
  /// then correspond to a basis of range(A^{q-1} S) rather than S itself;
  /// C W^+ C^T is unchanged.
  bool stabilized = false;

  double effective_pinv_tolerance() const;
};

enum class ApproxMode { full, rank_restricted, pinched, prolonged };

std::string_view to_string(ApproxMode m);

/// Low-rank SPSD approximation kept in factored form L * L^T.
struct Approximation {
  Matrix L;
  ApproxMode mode = ApproxMode::full;
  Index rank_bound = 0;
  /// Set when pinched/prolonged dropped numerically dependent columns of A S.
  bool rank_deficient = false;

  Matrix materialize() const { return L * L.transpose(); }
};

/// Builds (C, W) without forming A^q. Throws ArgumentError on dimension mismatch or q < 1.
SpsdSketch build(const SpsdMatrix& a, const SketchMatrix& s, int q = 1,
                 double pinv_tolerance = -1.0);

/// C W^+ C^T (mode full) or C W_k^+ C^T (mode rank_restricted, needs k).
/// Throws DegenerateSketchError if W is numerically zero.
Approximation approximate(const SpsdSketch& sk, ApproxMode mode = ApproxMode::full,
                          std::optional<Index> k = std::nullopt);

/// Q (Q^T A Q) Q^T with Q an orthonormal basis of range(A S).
Approximation pinched(const SpsdMatrix& a, const SketchMatrix& s, double rel_tol = -1.0);

/// A Q (Q^T A Q)^+ Q^T A with Q an orthonormal basis of range(A S).
Approximation prolonged(const SpsdMatrix& a, const SketchMatrix& s, double rel_tol = -1.0);

}  // namespace spsd
