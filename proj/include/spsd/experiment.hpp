#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spsd/bounds.hpp"
#include "spsd/core.hpp"
#include "spsd/kernels.hpp"
#include "spsd/sketch_builder.hpp"

namespace spsd {

/// Column-selection strategies compared by the harness.
enum class HarnessMethod { unif, lev, lev_frob, lev_spec, lev_power, gaussian, srft };

HarnessMethod parse_harness_method(std::string_view name);
std::string_view to_string(HarnessMethod m);
ApproxMode parse_approx_mode(std::string_view name);

/// A fixed ell or one of the symbolic sizes k+8, k ln k, k ln n.
struct EllSpec {
  enum class Kind { fixed, k_plus_8, k_ln_k, k_ln_n } kind = Kind::fixed;
  Index value = 0;

  /// "k+8", "k ln k", "k ln n" or a decimal integer.
  static EllSpec parse(std::string_view text);
  Index evaluate(Index k, Index n) const;
  std::string label() const;
};

struct InputSpec {
  /// Synthetic generator name, or empty when reading from `path`.
  std::string generator;
  Index n = 0;
  Index d = 0;
  Index clusters = 0;
  /// Rank of the "low_rank" generator and size of the top block of "gapped".
  Index rank = 0;
  double decay = 0.9;
  double gap = 100.0;
  std::uint64_t seed = 0;

  std::filesystem::path path;
  std::string format;

  /// How points or graphs become an SPSD matrix: linear, rbf, sparse-rbf, laplacian.
  std::string kernel;
  double sigma = 1.0;
  bool whiten = false;
};

struct ExperimentConfig {
  InputSpec input;
  Index k = 0;
  std::vector<EllSpec> ell_grid;
  std::vector<HarnessMethod> methods;
  std::vector<ApproxMode> modes{ApproxMode::full};
  int q = 1;
  int trials = 1;
  std::uint64_t master_seed = 0;
  double pinv_tolerance = -1.0;
  double rank_tolerance = 1e-10;
  bool timing = true;
  int threads = 1;
};

/// Throws ArgumentError describing the first invalid field.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// linear, rbf or sparse-rbf kernel of a point cloud (sparse-rbf with default nu and cutoff).
SpsdMatrix build_kernel(const PointCloud& p, std::string_view type, double sigma);

/// Builds the matrix an input spec describes (generator or file + kernel).
SpsdMatrix materialize_input(const InputSpec& in);

struct TrialTimes {
  double distribution = 0.0;
  double sketch = 0.0;
  double approx = 0.0;
};

struct TrialRecord {
  HarnessMethod method = HarnessMethod::unif;
  ApproxMode mode = ApproxMode::full;
  Index ell = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  /// ||A - approx|| / ||A - A_k|| per norm (||A|| replaces an optimum below 1e-12 ||A||).
  NormTriple ratios;
  NormTriple errors;
  TrialTimes times;
  bool full_row_rank = false;
  /// Deterministic bound right-hand sides (full mode with full row rank only).
  std::optional<NormTriple> deterministic;
  /// Empty on success; otherwise the failure message.
  std::string error;
};

struct ExperimentResult {
  Index n = 0;
  Index k = 0;
  int q = 1;
  NormTriple optimal;
  NormTriple matrix_norms;
  double gamma = 1.0;
  double coherence = 1.0;
  SpectrumSummary spectrum;
  std::vector<TrialRecord> records;
};

/// Per-trial seed: master seed XOR a stable hash of "method|ell|mode|trial".
std::uint64_t trial_seed(std::uint64_t master, HarnessMethod m, Index ell, ApproxMode mode,
                         int trial);

/// Residual norms of A - L L^T. Dense eigenvalues when n <= dense_limit or
/// when the residual may be indefinite; Gram identities plus power iteration otherwise.
NormTriple residual_norms(const SpsdMatrix& a, const Matrix& l, bool residual_psd,
                          Index dense_limit = 2000);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const SpsdMatrix& a);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace spsd
