#pragma once

#include <array>
#include <optional>

#include "spsd/core.hpp"
#include "spsd/sketching.hpp"

namespace spsd {

enum class NormKind { spectral, frobenius, trace };

std::string_view to_string(NormKind n);
double select(const NormTriple& t, NormKind n);

/// Omega1 = U1^T S and Omega2 = U2^T S.
struct InteractionPair {
  Matrix omega1;
  Matrix omega2;
  bool full_row_rank = false;
  double rank_tolerance = 1e-10;
};

InteractionPair interaction(const EigenPartition& e, const SketchMatrix& s,
                            double rank_tolerance = 1e-10);
InteractionPair interaction(const EigenPartition& e, const Matrix& s,
                            double rank_tolerance = 1e-10);

/// lambda_{k+1} / lambda_k; 1 when lambda_k == 0 (then `flag` is set).
double eigengap_ratio(const EigenPartition& e, bool* flag = nullptr);

/// ||S2|| + ||S2^{q-1/2} Omega2 Omega1^+||^{2/(2q-1)}.
double det_bound_spectral(const EigenPartition& e, const InteractionPair& pair, int q);
/// ||S2||_F + g^{q-1} ||S2^{1/2} O||_2 (sqrt(2 tr S2) + g^{q-1} ||S2^{1/2} O||_F).
double det_bound_frobenius(const EigenPartition& e, const InteractionPair& pair, int q);
/// tr S2 + g^{2(q-1)} ||S2^{1/2} O||_F^2.
double det_bound_trace(const EigenPartition& e, const InteractionPair& pair, int q);

struct BoundReport {
  NormKind norm = NormKind::spectral;
  double observed = 0.0;
  /// NaN when Omega1 is not of full row rank.
  double deterministic_rhs = 0.0;
  /// ||A||_xi, which every SPSD-model sketch satisfies.
  double crude_rhs = 0.0;
  std::optional<double> stochastic_rhs;
  std::optional<Index> sample_size_required;
  double gamma = 1.0;
  int q = 1;
  bool full_row_rank = false;

  bool certified(double slack) const;
};

/// Observed errors of C W^+ C^T for (A, S, q) against all three structural bounds.
std::array<BoundReport, 3> certify(const SpsdMatrix& a, const EigenPartition& e,
                                   const SketchMatrix& s, int q,
                                   double rank_tolerance = 1e-10);

struct AngleDiagnostics {
  double tan_max = 0.0;
  double sum_sq_tan = 0.0;
};

/// Tangents of the principal angles between range(S) and range(U1) for
/// orthonormal S. tan_max is +infinity when U1^T S is rank deficient.
AngleDiagnostics angle_diagnostics(const Matrix& s_orth, const Matrix& u1,
                                   double rank_tolerance = 1e-10);
/// The same quantities read directly off ||Omega2 Omega1^+||.
AngleDiagnostics angle_diagnostics(const InteractionPair& pair);

enum class SamplingScheme { leverage, srft, gaussian, uniform, experimental };

std::string_view to_string(SamplingScheme m);

struct SampleSizeParams {
  Index k = 0;
  Index n = 0;
  double epsilon = 0.5;
  double delta = 0.5;
  double beta = 1.0;
  double mu = 1.0;
  bool constants_to_one = false;
};

/// Number of columns the stochastic bounds require.
Index sample_size(SamplingScheme method, const SampleSizeParams& p);

/// The epsilon at which `sample_size` equals ell (inverse of the sample-size rule).
double epsilon_for_samples(SamplingScheme method, Index ell, const SampleSizeParams& p);

/// Spectrum quantities the stochastic predictors are evaluated from.
struct SpectrumSummary {
  NormTriple optimal;          ///< ||A - A_k|| in the three norms
  double tail_power_trace = 0; ///< tr((A - A_k)^{2q-1}) for the q in use
  NormTriple matrix;           ///< ||A|| in the three norms
  double diag_sq_sum = 0;      ///< sum_i A_ii^2
};

SpectrumSummary summarize_spectrum(const SpsdMatrix& a, const EigenPartition& e, int q);

enum class Predictor {
  leverage,
  srft,
  gaussian,
  uniform,
  // Reference predictors from earlier Nystrom analyses (constants set to one).
  drineas_mahoney,
  belabbas_wolfe,
  kumar_mohri_talwalkar,
};

std::string_view to_string(Predictor p);

enum class Granularity { lemma, table };

struct StochasticParams {
  Index k = 0;
  Index n = 0;
  Index ell = 0;
  double epsilon = 0.5;
  double delta = 0.5;
  double gamma = 1.0;
  int q = 1;
};

/// Right-hand side of the stochastic error bound for (predictor, norm).
/// Throws UnsupportedError for combinations with no bound.
double stochastic_bound(Predictor method, NormKind norm, const SpectrumSummary& spec,
                        const StochasticParams& p, bool constants_to_one,
                        Granularity granularity = Granularity::lemma);

}  // namespace spsd
