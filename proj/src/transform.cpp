#include "spsd/transform.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "spsd/error.hpp"

namespace spsd {
namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run_r2r(Matrix& x, fftw_r2r_kind kind) {
  const int n = static_cast<int>(x.rows());
  const int howmany = static_cast<int>(x.cols());
  if (n == 0 || howmany == 0) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_r2r(1, &n, howmany, x.data(), nullptr, 1, n, x.data(), nullptr, 1, n,
                              &kind, FFTW_ESTIMATE);
  }
  if (!plan) throw DecompositionError("FFTW could not create a DCT plan");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

Matrix dct_matrix(Index n) {
  Matrix t(n, n);
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double c = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j)
      t(k, j) = (k == 0 ? c0 : c) *
                std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * j + 1.0) /
                         (2.0 * static_cast<double>(n)));
  return t;
}

Matrix dct(const Matrix& x) {
  const Index n = x.rows();
  Matrix y = x;
  if (n <= 1) return y;
  run_r2r(y, FFTW_REDFT10);
  y.row(0) *= 0.5 * std::sqrt(1.0 / static_cast<double>(n));
  y.bottomRows(n - 1) *= 0.5 * std::sqrt(2.0 / static_cast<double>(n));
  return y;
}

Matrix dct_transpose(const Matrix& x) {
  const Index n = x.rows();
  Matrix y = x;
  if (n <= 1) return y;
  y.row(0) *= std::sqrt(1.0 / static_cast<double>(n));
  y.bottomRows(n - 1) *= std::sqrt(1.0 / (2.0 * static_cast<double>(n)));
  run_r2r(y, FFTW_REDFT01);
  return y;
}

}  // namespace spsd
