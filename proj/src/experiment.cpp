#include "spsd/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "json.hpp"
#include "spsd/error.hpp"
#include "spsd/io.hpp"
#include "spsd/levscore.hpp"
#include "spsd/random.hpp"
#include "spsd/synthetic.hpp"

namespace spsd {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Exact optima this small relative to ||A|| are treated as zero and the
// ratio is taken against ||A|| instead.
constexpr double kZeroOptimum = 1e-12;

constexpr std::uint64_t kTagDistribution = 21;
constexpr std::uint64_t kTagSketch = 22;

template <typename F>
double timed(bool enabled, F&& f) {
  if (!enabled) {
    f();
    return 0.0;
  }
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config field '") + key + "': " + e.what());
  }
}

InputSpec parse_input(const json& j) {
  if (!j.is_object()) throw ArgumentError("config field 'input' must be an object");
  InputSpec in;
  in.generator = get_or<std::string>(j, "generator", "");
  in.path = get_or<std::string>(j, "path", "");
  in.format = get_or<std::string>(j, "format", "");
  in.n = get_or<Index>(j, "n", 0);
  in.d = get_or<Index>(j, "d", 0);
  in.clusters = get_or<Index>(j, "clusters", 0);
  in.rank = get_or<Index>(j, "rank", 0);
  in.decay = get_or<double>(j, "decay", in.decay);
  in.gap = get_or<double>(j, "gap", in.gap);
  in.seed = get_or<std::uint64_t>(j, "seed", 0);
  in.kernel = get_or<std::string>(j, "kernel", "");
  in.sigma = get_or<double>(j, "sigma", in.sigma);
  in.whiten = get_or<bool>(j, "whiten", false);
  if (in.generator.empty() == in.path.empty())
    throw ArgumentError("input needs exactly one of 'generator' or 'path'");
  if (!in.path.empty() && in.format.empty()) throw ArgumentError("input 'path' needs a 'format'");
  return in;
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) { return splitmix64(seed ^ splitmix64(tag)); }

// Spectral norm of the PSD residual A - L L^T by power iteration.
double residual_spectral(const SpsdMatrix& a, const Matrix& l) {
  const Index n = a.n();
  Vector x = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  RandomStream rng(0x5EC7);
  for (Index i = 0; i < n; ++i) x(i) += 1e-3 * rng.normal();
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector y = a.entries() * x - l * (l.transpose() * x);
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) return std::max(next, 0.0);
    lambda = next;
  }
  return std::max(lambda, 0.0);
}

struct Prepared {
  EigenPartition partition;
  LeverageProfile leverage;
};

}  // namespace

HarnessMethod parse_harness_method(std::string_view name) {
  if (name == "unif") return HarnessMethod::unif;
  if (name == "lev") return HarnessMethod::lev;
  if (name == "lev_frob") return HarnessMethod::lev_frob;
  if (name == "lev_spec") return HarnessMethod::lev_spec;
  if (name == "lev_power") return HarnessMethod::lev_power;
  if (name == "gaussian") return HarnessMethod::gaussian;
  if (name == "srft") return HarnessMethod::srft;
  throw ArgumentError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(HarnessMethod m) {
  switch (m) {
    case HarnessMethod::unif: return "unif";
    case HarnessMethod::lev: return "lev";
    case HarnessMethod::lev_frob: return "lev_frob";
    case HarnessMethod::lev_spec: return "lev_spec";
    case HarnessMethod::lev_power: return "lev_power";
    case HarnessMethod::gaussian: return "gaussian";
    case HarnessMethod::srft: return "srft";
  }
  return "unknown";
}

ApproxMode parse_approx_mode(std::string_view name) {
  if (name == "full") return ApproxMode::full;
  if (name == "rank_restricted") return ApproxMode::rank_restricted;
  if (name == "pinched") return ApproxMode::pinched;
  if (name == "prolonged") return ApproxMode::prolonged;
  throw ArgumentError("unknown mode '" + std::string(name) + "'");
}

EllSpec EllSpec::parse(std::string_view text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t == "k+8") return {Kind::k_plus_8, 0};
  if (t == "klnk") return {Kind::k_ln_k, 0};
  if (t == "klnn") return {Kind::k_ln_n, 0};
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size() || t.empty() || v < 1)
    throw ArgumentError("ell entry '" + std::string(text) + "' is neither a positive integer nor k+8, k ln k, k ln n");
  return {Kind::fixed, static_cast<Index>(v)};
}

Index EllSpec::evaluate(Index k, Index n) const {
  const double kd = static_cast<double>(k);
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::k_plus_8: return k + 8;
    case Kind::k_ln_k: return static_cast<Index>(std::ceil(kd * std::log(kd)));
    case Kind::k_ln_n: return static_cast<Index>(std::ceil(kd * std::log(static_cast<double>(n))));
  }
  return value;
}

std::string EllSpec::label() const {
  switch (kind) {
    case Kind::fixed: return std::to_string(value);
    case Kind::k_plus_8: return "k+8";
    case Kind::k_ln_k: return "k ln k";
    case Kind::k_ln_n: return "k ln n";
  }
  return "";
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");

  ExperimentConfig cfg;
  if (!j.contains("input")) throw ArgumentError("config is missing 'input'");
  cfg.input = parse_input(j.at("input"));
  cfg.k = get_or<Index>(j, "k", 0);
  if (cfg.k < 1) throw ArgumentError("config 'k' must be a positive integer");

  if (!j.contains("ell") || !j.at("ell").is_array() || j.at("ell").empty())
    throw ArgumentError("config 'ell' must be a nonempty array");
  for (const json& e : j.at("ell")) {
    if (e.is_number_integer()) {
      const auto v = e.get<long long>();
      if (v < cfg.k) throw ArgumentError("ell entry " + std::to_string(v) + " is below k");
      cfg.ell_grid.push_back({EllSpec::Kind::fixed, static_cast<Index>(v)});
    } else if (e.is_string()) {
      EllSpec s = EllSpec::parse(e.get<std::string>());
      if (s.kind == EllSpec::Kind::fixed && s.value < cfg.k)
        throw ArgumentError("ell entry " + std::to_string(s.value) + " is below k");
      cfg.ell_grid.push_back(s);
    } else {
      throw ArgumentError("ell entries must be integers or strings");
    }
  }

  if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
    throw ArgumentError("config 'methods' must be a nonempty array");
  for (const json& m : j.at("methods")) {
    if (!m.is_string()) throw ArgumentError("methods must be strings");
    cfg.methods.push_back(parse_harness_method(m.get<std::string>()));
  }
  if (j.contains("modes")) {
    if (!j.at("modes").is_array() || j.at("modes").empty())
      throw ArgumentError("config 'modes' must be a nonempty array");
    cfg.modes.clear();
    for (const json& m : j.at("modes")) {
      if (!m.is_string()) throw ArgumentError("modes must be strings");
      cfg.modes.push_back(parse_approx_mode(m.get<std::string>()));
    }
  }
  cfg.q = get_or<int>(j, "q", 1);
  if (cfg.q < 1) throw ArgumentError("config 'q' must be >= 1");
  cfg.trials = get_or<int>(j, "trials", 1);
  if (cfg.trials < 1) throw ArgumentError("config 'trials' must be >= 1");
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);
  cfg.timing = get_or<bool>(j, "timing", true);
  cfg.threads = get_or<int>(j, "threads", 1);
  if (cfg.threads < 1) throw ArgumentError("config 'threads' must be >= 1");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    cfg.pinv_tolerance = get_or<double>(t, "pinv", cfg.pinv_tolerance);
    cfg.rank_tolerance = get_or<double>(t, "rank", cfg.rank_tolerance);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  if (!cfg.input.path.empty() && cfg.input.path.is_relative())
    cfg.input.path = path.parent_path() / cfg.input.path;
  return cfg;
}

SpsdMatrix build_kernel(const PointCloud& p, std::string_view type, double sigma) {
  if (type == "linear") return linear_kernel(p);
  if (type == "rbf") return rbf_kernel(p, sigma);
  if (type == "sparse-rbf" || type == "sparse_rbf") return sparse_rbf_kernel(p, sigma).kernel;
  throw ArgumentError("unknown point kernel '" + std::string(type) + "'");
}

SpsdMatrix materialize_input(const InputSpec& in) {
  std::optional<PointCloud> points;
  if (!in.generator.empty()) {
    const std::string& g = in.generator;
    if (g == "random_spsd") return random_spsd(in.n, in.decay, in.seed);
    if (g == "gapped") return gapped_spsd(in.n, in.rank, in.gap, in.seed);
    if (g == "low_rank") return low_rank_spsd(in.n, in.rank, in.seed);
    if (g == "clustered") points = clustered_points(in.n, in.d, in.clusters, in.seed);
    else if (g == "gaussian_points") points = gaussian_points(in.n, in.d, in.seed);
    else throw ArgumentError("unknown generator '" + g + "'");
  } else {
    Dataset data = load_dataset(in.path, parse_data_format(in.format));
    if (auto* m = std::get_if<SpsdMatrix>(&data)) return *m;
    if (auto* g = std::get_if<Graph>(&data)) {
      if (!in.kernel.empty() && in.kernel != "laplacian")
        throw ArgumentError("graphs only support the laplacian kernel");
      return normalized_laplacian(*g);
    }
    points = std::get<PointCloud>(std::move(data));
  }
  if (in.whiten) points = whiten(*points).points;
  return build_kernel(*points, in.kernel.empty() ? "rbf" : in.kernel, in.sigma);
}

std::uint64_t trial_seed(std::uint64_t master, HarnessMethod m, Index ell, ApproxMode mode,
                         int trial) {
  const std::string key = std::string(to_string(m)) + "|" + std::to_string(ell) + "|" +
                          std::string(to_string(mode)) + "|" + std::to_string(trial);
  return master ^ stable_hash(key.data(), key.size());
}

NormTriple residual_norms(const SpsdMatrix& a, const Matrix& l, bool residual_psd,
                          Index dense_limit) {
  if (a.n() <= dense_limit || !residual_psd) return symmetric_norms(a.entries() - l * l.transpose());
  const NormTriple whole = norms(a);
  const Matrix ltl = l.transpose() * l;
  const double cross = (l.transpose() * a.entries() * l).trace();
  NormTriple t;
  t.trace = std::max(0.0, whole.trace - ltl.trace());
  t.frobenius = std::sqrt(std::max(0.0, whole.frobenius * whole.frobenius - 2.0 * cross + ltl.squaredNorm()));
  t.spectral = residual_spectral(a, l);
  return t;
}

namespace {

TrialRecord run_trial(const ExperimentConfig& cfg, const SpsdMatrix& a, const Prepared& prep,
                      HarnessMethod method, Index ell, ApproxMode mode, int trial,
                      const NormTriple& denom) {
  TrialRecord rec;
  rec.method = method;
  rec.mode = mode;
  rec.ell = ell;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.master_seed, method, ell, mode, trial);
  const Index n = a.n();
  const Index k = cfg.k;
  const std::uint64_t dseed = derive(rec.seed, kTagDistribution);
  const std::uint64_t sseed = derive(rec.seed, kTagSketch);
  try {
    SamplingDistribution dist;
    rec.times.distribution = timed(cfg.timing, [&] {
      switch (method) {
        case HarnessMethod::lev: dist = leverage_distribution(prep.leverage); break;
        case HarnessMethod::lev_frob:
          dist = distribution_from_scores(approx_lev_frob(a, k, {0, 0.5, 2 * k}, dseed).scores);
          break;
        case HarnessMethod::lev_spec:
          dist = distribution_from_scores(approx_lev_frob(a, k, {4, 0.5, 2 * k}, dseed).scores);
          break;
        case HarnessMethod::lev_power:
          dist = distribution_from_scores(approx_lev_power(a, k, {}, dseed).scores);
          break;
        default: break;
      }
    });

    std::optional<SketchMatrix> s;
    std::optional<SpsdSketch> sk;
    rec.times.sketch = timed(cfg.timing, [&] {
      switch (method) {
        case HarnessMethod::unif: s = uniform_sketch(n, ell, false, sseed); break;
        case HarnessMethod::gaussian: s = gaussian_sketch(n, ell, sseed); break;
        case HarnessMethod::srft: s = srft_sketch(n, ell, sseed); break;
        default: s = leverage_sketch(dist, ell, sseed); break;
      }
      if (mode == ApproxMode::full || mode == ApproxMode::rank_restricted)
        sk = build(a, *s, cfg.q, cfg.pinv_tolerance);
    });

    Approximation approx;
    rec.times.approx = timed(cfg.timing, [&] {
      switch (mode) {
        case ApproxMode::full: approx = approximate(*sk, ApproxMode::full); break;
        case ApproxMode::rank_restricted: approx = approximate(*sk, ApproxMode::rank_restricted, k); break;
        case ApproxMode::pinched: approx = pinched(a, *s); break;
        case ApproxMode::prolonged: approx = prolonged(a, *s); break;
      }
    });

    rec.errors = residual_norms(a, approx.L, mode != ApproxMode::pinched);
    rec.ratios = {rec.errors.spectral / denom.spectral, rec.errors.frobenius / denom.frobenius,
                  rec.errors.trace / denom.trace};
    const InteractionPair pair = interaction(prep.partition, *s, cfg.rank_tolerance);
    rec.full_row_rank = pair.full_row_rank;
    if (mode == ApproxMode::full && pair.full_row_rank)
      rec.deterministic = NormTriple{det_bound_spectral(prep.partition, pair, cfg.q),
                                     det_bound_frobenius(prep.partition, pair, cfg.q),
                                     det_bound_trace(prep.partition, pair, cfg.q)};
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const SpsdMatrix& a) {
  const Index n = a.n();
  if (cfg.k < 1 || cfg.k >= n)
    throw ArgumentError("k=" + std::to_string(cfg.k) + " must satisfy 1 <= k < n=" + std::to_string(n));
  if (cfg.methods.empty() || cfg.ell_grid.empty() || cfg.modes.empty() || cfg.trials < 1)
    throw ArgumentError("config needs methods, ell values, modes and at least one trial");

  std::vector<Index> ells;
  for (const EllSpec& e : cfg.ell_grid) {
    const Index ell = e.evaluate(cfg.k, n);
    if (ell < cfg.k || ell > n)
      throw ArgumentError("ell " + e.label() + " = " + std::to_string(ell) + " must lie in [k, n]");
    ells.push_back(ell);
  }

  Prepared prep{eigendecompose(a, cfg.k), {}};
  prep.leverage = leverage_scores(prep.partition);

  ExperimentResult res;
  res.n = n;
  res.k = cfg.k;
  res.q = cfg.q;
  res.optimal = optimal_errors(prep.partition);
  res.matrix_norms = norms(a);
  res.gamma = eigengap_ratio(prep.partition);
  res.coherence = prep.leverage.coherence;
  res.spectrum = summarize_spectrum(a, prep.partition, cfg.q);

  NormTriple denom = res.optimal;
  for (NormKind kind : {NormKind::spectral, NormKind::frobenius, NormKind::trace}) {
    double& d = kind == NormKind::spectral ? denom.spectral
                : kind == NormKind::frobenius ? denom.frobenius : denom.trace;
    if (d <= kZeroOptimum * select(res.matrix_norms, kind)) d = select(res.matrix_norms, kind);
  }

  struct Task {
    HarnessMethod method;
    Index ell;
    ApproxMode mode;
    int trial;
  };
  std::vector<Task> tasks;
  for (HarnessMethod m : cfg.methods)
    for (Index ell : ells)
      for (ApproxMode mode : cfg.modes)
        for (int t = 0; t < cfg.trials; ++t) tasks.push_back({m, ell, mode, t});

  res.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      res.records[i] = run_trial(cfg, a, prep, t.method, t.ell, t.mode, t.trial, denom);
    }
  };
  const auto nthreads = static_cast<std::size_t>(std::max(1, cfg.threads));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < std::min(nthreads, tasks.size()); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, materialize_input(cfg.input));
}

}  // namespace spsd
