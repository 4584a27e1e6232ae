#include "spsd/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spsd/error.hpp"
#include "spsd/sketch_builder.hpp"

namespace spsd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

InteractionPair make_pair(Matrix omega1, Matrix omega2, double rank_tolerance) {
  InteractionPair p;
  p.omega1 = std::move(omega1);
  p.omega2 = std::move(omega2);
  p.rank_tolerance = rank_tolerance;
  const Index k = p.omega1.rows();
  if (p.omega1.cols() >= k && k > 0) {
    Eigen::JacobiSVD<Matrix> svd(p.omega1);
    const Vector& s = svd.singularValues();
    // Rank is judged against the size of S itself, so an Omega1 made only of
    // rounding noise (S orthogonal to U1) is not mistaken for full rank.
    Matrix stacked(p.omega1.rows() + p.omega2.rows(), p.omega1.cols());
    stacked << p.omega1, p.omega2;
    const double scale = Eigen::JacobiSVD<Matrix>(stacked).singularValues()(0);
    p.full_row_rank = scale > 0.0 && s(k - 1) > rank_tolerance * scale;
  }
  return p;
}

void require_full_rank(const InteractionPair& pair, const char* who) {
  if (!pair.full_row_rank)
    throw BoundInapplicableError(std::string(who) +
                                 ": Omega1 is not of full row rank; only the crude bound ||A|| applies");
}

// Omega2 * Omega1^+ (exact pseudoinverse of a full-row-rank Omega1).
Matrix tangent_matrix(const InteractionPair& pair) {
  return pair.omega2 * pseudoinverse(pair.omega1, pair.rank_tolerance);
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double pow_safe(double base, double e) { return base <= 0.0 ? 0.0 : std::pow(base, e); }

void check_q(int q) {
  if (q < 1) throw ArgumentError("q must be >= 1, got " + std::to_string(q));
}

}  // namespace

std::string_view to_string(NormKind n) {
  switch (n) {
    case NormKind::spectral: return "spectral";
    case NormKind::frobenius: return "frobenius";
    case NormKind::trace: return "trace";
  }
  return "unknown";
}

double select(const NormTriple& t, NormKind n) {
  switch (n) {
    case NormKind::spectral: return t.spectral;
    case NormKind::frobenius: return t.frobenius;
    case NormKind::trace: return t.trace;
  }
  return 0.0;
}

InteractionPair interaction(const EigenPartition& e, const SketchMatrix& s, double rank_tolerance) {
  if (s.n() != e.n()) throw ArgumentError("interaction: sketch and partition dimensions differ");
  return make_pair(s.transpose_apply(e.U1).transpose(), s.transpose_apply(e.U2).transpose(),
                   rank_tolerance);
}

InteractionPair interaction(const EigenPartition& e, const Matrix& s, double rank_tolerance) {
  if (s.rows() != e.n()) throw ArgumentError("interaction: sketch and partition dimensions differ");
  return make_pair(e.U1.transpose() * s, e.U2.transpose() * s, rank_tolerance);
}

double eigengap_ratio(const EigenPartition& e, bool* flag) {
  const double lk = e.sigma1(e.k - 1);
  const double lk1 = e.sigma2.size() ? e.sigma2(0) : 0.0;
  if (flag) *flag = !(lk > 0.0);
  return lk > 0.0 ? lk1 / lk : 1.0;
}

double det_bound_spectral(const EigenPartition& e, const InteractionPair& pair, int q) {
  check_q(q);
  require_full_rank(pair, "det_bound_spectral");
  const Matrix x = tangent_matrix(pair);
  const Vector d = e.sigma2.unaryExpr([q](double v) { return pow_safe(v, q - 0.5); });
  const double t = spectral_norm(d.asDiagonal() * x);
  return (e.sigma2.size() ? e.sigma2(0) : 0.0) + pow_safe(t, 2.0 / (2.0 * q - 1.0));
}

double det_bound_frobenius(const EigenPartition& e, const InteractionPair& pair, int q) {
  check_q(q);
  require_full_rank(pair, "det_bound_frobenius");
  const Matrix y = e.sigma2.cwiseSqrt().asDiagonal() * tangent_matrix(pair);
  const double g = std::pow(eigengap_ratio(e), q - 1);
  return e.sigma2.norm() +
         g * spectral_norm(y) * (std::sqrt(2.0 * e.sigma2.sum()) + g * y.norm());
}

double det_bound_trace(const EigenPartition& e, const InteractionPair& pair, int q) {
  check_q(q);
  require_full_rank(pair, "det_bound_trace");
  const Matrix y = e.sigma2.cwiseSqrt().asDiagonal() * tangent_matrix(pair);
  return e.sigma2.sum() + std::pow(eigengap_ratio(e), 2 * (q - 1)) * y.squaredNorm();
}

bool BoundReport::certified(double slack) const {
  return observed <= (full_row_rank ? deterministic_rhs : crude_rhs) + slack;
}

std::array<BoundReport, 3> certify(const SpsdMatrix& a, const EigenPartition& e,
                                   const SketchMatrix& s, int q, double rank_tolerance) {
  const InteractionPair pair = interaction(e, s, rank_tolerance);
  const Approximation approx = approximate(build(a, s, q));
  const NormTriple observed = symmetric_norms(a.entries() - approx.materialize());
  const NormTriple whole = norms(a);
  const double gamma = eigengap_ratio(e);
  std::array<BoundReport, 3> out;
  const NormKind kinds[3] = {NormKind::spectral, NormKind::frobenius, NormKind::trace};
  for (int i = 0; i < 3; ++i) {
    BoundReport& r = out[static_cast<std::size_t>(i)];
    r.norm = kinds[i];
    r.observed = select(observed, kinds[i]);
    r.crude_rhs = select(whole, kinds[i]);
    r.gamma = gamma;
    r.q = q;
    r.full_row_rank = pair.full_row_rank;
    r.deterministic_rhs = std::numeric_limits<double>::quiet_NaN();
    if (pair.full_row_rank) {
      switch (kinds[i]) {
        case NormKind::spectral: r.deterministic_rhs = det_bound_spectral(e, pair, q); break;
        case NormKind::frobenius: r.deterministic_rhs = det_bound_frobenius(e, pair, q); break;
        case NormKind::trace: r.deterministic_rhs = det_bound_trace(e, pair, q); break;
      }
    }
  }
  return out;
}

AngleDiagnostics angle_diagnostics(const Matrix& s_orth, const Matrix& u1, double rank_tolerance) {
  if (s_orth.rows() != u1.rows()) throw ArgumentError("angle_diagnostics: dimension mismatch");
  InteractionPair pair;
  pair.omega1 = u1.transpose() * s_orth;
  // U2 Omega2 without forming U2: the component of S orthogonal to range(U1).
  pair.omega2 = s_orth - u1 * pair.omega1;
  pair = make_pair(std::move(pair.omega1), std::move(pair.omega2), rank_tolerance);
  return angle_diagnostics(pair);
}

AngleDiagnostics angle_diagnostics(const InteractionPair& pair) {
  if (!pair.full_row_rank) return {kInf, kInf};
  const Matrix x = tangent_matrix(pair);
  return {spectral_norm(x), x.squaredNorm()};
}

std::string_view to_string(SamplingScheme m) {
  switch (m) {
    case SamplingScheme::leverage: return "leverage";
    case SamplingScheme::srft: return "srft";
    case SamplingScheme::gaussian: return "gaussian";
    case SamplingScheme::uniform: return "uniform";
    case SamplingScheme::experimental: return "experimental";
  }
  return "unknown";
}

namespace {

void check_sample_params(SamplingScheme method, const SampleSizeParams& p, bool need_epsilon) {
  if (p.k < 1) throw ArgumentError("sample_size: k must be >= 1");
  if (method == SamplingScheme::experimental) return;
  if (need_epsilon && !(p.epsilon > 0.0 && p.epsilon <= 1.0))
    throw ArgumentError("sample_size: epsilon must lie in (0, 1]");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw ArgumentError("sample_size: delta must lie in (0, 1)");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) throw ArgumentError("sample_size: beta must lie in (0, 1]");
  if (!(p.mu > 0.0)) throw ArgumentError("sample_size: mu must be positive");
  if (method == SamplingScheme::srft && p.n < 1) throw ArgumentError("sample_size: srft needs n");
}

// Sample size divided by the epsilon power it scales with (eps^-2 or eps^-1).
double epsilon_free_size(SamplingScheme method, const SampleSizeParams& p) {
  const bool one = p.constants_to_one;
  const auto c = [one](double v) { return one ? 1.0 : v; };
  const double k = static_cast<double>(p.k);
  switch (method) {
    case SamplingScheme::leverage:
      return c(3200.0) / p.beta * k * std::log(c(4.0) * k / (p.beta * p.delta));
    case SamplingScheme::srft: {
      const double root = std::sqrt(k) + std::sqrt(c(8.0) * std::log(c(8.0) * p.n / p.delta));
      return c(24.0) * root * root * std::log(c(8.0) * k / p.delta);
    }
    case SamplingScheme::gaussian: return c(2.0) * k * std::log(k);
    case SamplingScheme::uniform: return c(2.0) * p.mu * k * std::log(k / p.delta);
    case SamplingScheme::experimental: return 6.0 * k * std::log(k);
  }
  return 0.0;
}

}  // namespace

Index sample_size(SamplingScheme method, const SampleSizeParams& p) {
  check_sample_params(method, p, true);
  const double base = epsilon_free_size(method, p);
  double ell = base;
  if (method == SamplingScheme::srft) ell = base / p.epsilon;
  else if (method != SamplingScheme::experimental) ell = base / (p.epsilon * p.epsilon);
  return std::max<Index>(p.k, static_cast<Index>(std::ceil(ell)));
}

double epsilon_for_samples(SamplingScheme method, Index ell, const SampleSizeParams& p) {
  if (method == SamplingScheme::experimental)
    throw ArgumentError("epsilon_for_samples: the experimental rule has no epsilon");
  check_sample_params(method, p, false);
  if (ell < 1) throw ArgumentError("epsilon_for_samples: ell must be positive");
  const double ratio = epsilon_free_size(method, p) / static_cast<double>(ell);
  return method == SamplingScheme::srft ? ratio : std::sqrt(std::max(ratio, 0.0));
}

SpectrumSummary summarize_spectrum(const SpsdMatrix& a, const EigenPartition& e, int q) {
  check_q(q);
  SpectrumSummary s;
  s.optimal = optimal_errors(e);
  s.tail_power_trace = e.sigma2.unaryExpr([q](double v) { return pow_safe(v, 2.0 * q - 1.0); }).sum();
  s.matrix = norms(a);
  s.diag_sq_sum = a.entries().diagonal().squaredNorm();
  return s;
}

std::string_view to_string(Predictor p) {
  switch (p) {
    case Predictor::leverage: return "leverage";
    case Predictor::srft: return "srft";
    case Predictor::gaussian: return "gaussian";
    case Predictor::uniform: return "uniform";
    case Predictor::drineas_mahoney: return "drineas_mahoney";
    case Predictor::belabbas_wolfe: return "belabbas_wolfe";
    case Predictor::kumar_mohri_talwalkar: return "kumar_mohri_talwalkar";
  }
  return "unknown";
}

namespace {

[[noreturn]] void unsupported(Predictor m, NormKind n) {
  throw UnsupportedError("no " + std::string(to_string(n)) + "-norm bound for predictor " +
                         std::string(to_string(m)));
}

double table_bound(Predictor method, NormKind norm, const SpectrumSummary& s,
                   const StochasticParams& p) {
  const double eps = p.epsilon;
  const double k = static_cast<double>(p.k);
  const double o2 = s.optimal.spectral, oF = s.optimal.frobenius, oT = s.optimal.trace;
  switch (method) {
    case Predictor::uniform:
      if (norm == NormKind::spectral) return o2 * (1.0 + static_cast<double>(p.n) / (eps * p.ell));
      if (norm == NormKind::frobenius) return oF + oT / eps;
      return oT * (1.0 + 1.0 / eps);
    case Predictor::leverage:
      if (norm == NormKind::spectral) return o2 + eps * eps * oT;
      if (norm == NormKind::frobenius) return oF + eps * oT;
      return (1.0 + eps * eps) * oT;
    case Predictor::srft: {
      const double d = 1.0 - std::sqrt(eps);
      if (norm == NormKind::spectral) return d > 0.0 ? (1.0 + 1.0 / d) * o2 + eps * oT / (d * k) : kInf;
      if (norm == NormKind::frobenius) return oF + std::sqrt(eps) * oT;
      return (1.0 + eps) * oT;
    }
    case Predictor::gaussian:
      if (norm == NormKind::spectral) return (1.0 + eps * eps) * o2 + eps / k * oT;
      if (norm == NormKind::frobenius) return oF + eps * oT;
      return (1.0 + eps * eps) * oT;
    default: break;
  }
  unsupported(method, norm);
}

double lemma_bound(Predictor method, NormKind norm, const SpectrumSummary& s,
                   const StochasticParams& p, bool one) {
  const auto c = [one](double v) { return one ? 1.0 : v; };
  const double eps = p.epsilon;
  const double k = static_cast<double>(p.k);
  const double n = static_cast<double>(p.n);
  const double ell = static_cast<double>(p.ell);
  const double inv = 1.0 / (2.0 * p.q - 1.0);
  const double g1 = std::pow(p.gamma, p.q - 1);
  const double g2 = g1 * g1;
  const double o2 = s.optimal.spectral, oF = s.optimal.frobenius, oT = s.optimal.trace;
  const double tail = pow_safe(s.tail_power_trace, inv);

  switch (method) {
    case Predictor::leverage:
      if (norm == NormKind::spectral) return o2 + pow_safe(eps * eps * s.tail_power_trace, inv);
      if (norm == NormKind::frobenius) return oF + (c(std::sqrt(2.0)) * eps * g1 + eps * eps * g2) * oT;
      return (1.0 + g2 * eps * eps) * oT;
    case Predictor::srft: {
      const double d = 1.0 - std::sqrt(eps);
      if (norm == NormKind::spectral) {
        if (!(d > 0.0)) return kInf;
        const double lnd = std::log(n / p.delta);
        return (1.0 + std::pow((c(5.0) + c(16.0) * lnd * lnd / ell) / d, inv)) * o2 +
               std::pow(c(2.0) * lnd / (d * ell), inv) * tail;
      }
      if (norm == NormKind::frobenius) return oF + (c(7.0) * g1 * std::sqrt(eps) + c(22.0) * g2 * eps) * oT;
      return (1.0 + c(22.0) * eps * g2) * oT;
    }
    case Predictor::gaussian: {
      if (p.k < 2) throw ArgumentError("stochastic_bound: the Gaussian bound needs k >= 2");
      const double lk = std::log(k);
      const double e2 = eps * eps;
      if (norm == NormKind::spectral)
        return (1.0 + std::pow(c(89.0) * e2 / lk + c(874.0) * e2 / k, inv)) * o2 +
               std::pow(c(219.0) * e2 / (k * lk), inv) * oT;
      if (norm == NormKind::frobenius) {
        const double mixed = g1 * eps * (c(42.0) / std::sqrt(k) + c(14.0) / std::sqrt(lk)) +
                             g2 * e2 *
                                 (c(45.0) / lk + c(140.0) / std::sqrt(k * lk) +
                                  c(219.0) / (k * std::sqrt(lk)));
        return oF + mixed * std::sqrt(o2 * oT) +
               (c(21.0) * g1 * eps / std::sqrt(k * lk) + c(70.0) * g2 * e2 / (std::sqrt(k) * lk)) * oT +
               g2 * e2 * (c(140.0) / std::sqrt(k * lk) + c(437.0) / k) * o2;
      }
      return (1.0 + c(45.0) * g2 * e2 / lk) * oT + c(437.0) * g2 * e2 / k * o2;
    }
    case Predictor::uniform: {
      const double d = 1.0 - eps;
      if (!(d > 0.0)) return kInf;
      if (norm == NormKind::spectral) return (1.0 + std::pow(n / (d * ell), inv)) * o2;
      if (norm == NormKind::frobenius)
        return oF + (g1 * c(std::sqrt(2.0)) / (p.delta * std::sqrt(d)) + g2 / (d * p.delta * p.delta)) * oT;
      return (1.0 + g2 / (p.delta * p.delta * d)) * oT;
    }
    default: break;
  }
  unsupported(method, norm);
}

double prior_bound(Predictor method, NormKind norm, const SpectrumSummary& s,
                   const StochasticParams& p) {
  const double k = static_cast<double>(p.k);
  const double n = static_cast<double>(p.n);
  const double ell = static_cast<double>(p.ell);
  switch (method) {
    case Predictor::drineas_mahoney: {
      if (norm == NormKind::trace) break;
      const double eps = std::pow(k * std::log(1.0 / p.delta) / ell, 0.25);
      return select(s.optimal, norm) + eps * s.diag_sq_sum;
    }
    case Predictor::belabbas_wolfe:
      if (norm != NormKind::trace) break;
      return (n - ell) / n * s.matrix.trace;
    case Predictor::kumar_mohri_talwalkar:
      if (norm == NormKind::spectral) return s.optimal.spectral + n / std::sqrt(ell) * s.matrix.spectral;
      if (norm == NormKind::frobenius)
        return s.optimal.frobenius + n * std::pow(k / ell, 0.25) * s.matrix.spectral;
      break;
    default: break;
  }
  unsupported(method, norm);
}

}  // namespace

double stochastic_bound(Predictor method, NormKind norm, const SpectrumSummary& spec,
                        const StochasticParams& p, bool constants_to_one, Granularity granularity) {
  if (p.k < 1 || p.ell < 1 || p.n < 1) throw ArgumentError("stochastic_bound: k, ell, n must be positive");
  if (!(p.epsilon > 0.0)) throw ArgumentError("stochastic_bound: epsilon must be positive");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw ArgumentError("stochastic_bound: delta must lie in (0, 1)");
  check_q(p.q);
  switch (method) {
    case Predictor::drineas_mahoney:
    case Predictor::belabbas_wolfe:
    case Predictor::kumar_mohri_talwalkar: return prior_bound(method, norm, spec, p);
    default: break;
  }
  if (granularity == Granularity::table) return table_bound(method, norm, spec, p);
  return lemma_bound(method, norm, spec, p, constants_to_one);
}

}  // namespace spsd
