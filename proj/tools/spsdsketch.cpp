#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spsd/bounds.hpp"
#include "spsd/error.hpp"
#include "spsd/experiment.hpp"
#include "spsd/io.hpp"
#include "spsd/kernels.hpp"
#include "spsd/levscore.hpp"
#include "spsd/report.hpp"
#include "spsd/sketching.hpp"

using namespace spsd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<int> threads;
  bool predictors = false;
};

struct KernelArgs {
  std::string type;
  std::string input;
  std::string format;
  double sigma = 1.0;
  std::optional<int> nu;
  std::optional<double> cutoff;
  bool whiten = false;
  double drop_below = 0.0;
  std::string out;
};

struct LevArgs {
  std::string algo;
  std::string input;
  std::string format = "matrix_market";
  Index k = 0;
  double epsilon = 0.5;
  double delta = 0.1;
  std::optional<int> q;
  std::optional<Index> r;
  double tol = 1e-2;
  int max_iters = 50;
  std::uint64_t seed = 0;
  std::string out;
};

struct BoundsArgs {
  bool check = false;
  std::string input;
  Index k = 0;
  Index ell = 0;
  int q = 1;
  std::string sketch = "gaussian";
  std::uint64_t seed = 0;
  double slack = 1e-8;

  std::string scheme;
  Index n = 0;
  double epsilon = 0.5;
  double delta = 0.5;
  double beta = 1.0;
  double mu = 1.0;
  bool constants_to_one = false;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

// Writes to `path`, or to stdout when it is empty.
template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty()) {
    std::cout << std::setprecision(17);
    write(std::cout);
    return;
  }
  auto f = open_file(path);
  f << std::setprecision(17);
  write(f);
  if (!f) throw IoError("write failed: " + path);
}

SpsdMatrix load_spsd(const std::string& path) {
  Dataset d = load_dataset(path, DataFormat::matrix_market);
  return std::get<SpsdMatrix>(std::move(d));
}

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg = load_config(args.config);
  if (args.threads) {
    if (*args.threads < 1) throw ArgumentError("--threads must be >= 1");
    cfg.threads = *args.threads;
  }
  const ExperimentResult result = run_experiment(cfg);
  report(result, args.predictors, args.out);

  std::size_t failed = 0;
  for (const TrialRecord& r : result.records) failed += !r.error.empty();
  std::printf("n=%lld k=%lld q=%d records=%zu failed=%zu\n", static_cast<long long>(result.n),
              static_cast<long long>(result.k), result.q, result.records.size(), failed);
  for (const SummaryRow& row : summarize(result.records)) {
    std::printf("%-10s %-16s ell=%-5lld %-9s min=%.4g mean=%.4g max=%.4g\n",
                std::string(to_string(row.method)).c_str(), std::string(to_string(row.mode)).c_str(),
                static_cast<long long>(row.ell), std::string(to_string(row.norm)).c_str(), row.min,
                row.mean, row.max);
  }
  return kExitOk;
}

int cmd_kernel(const KernelArgs& args) {
  std::string format = args.format;
  if (format.empty()) format = args.type == "laplacian" ? "edge_list" : "csv_points";
  Dataset d = load_dataset(args.input, parse_data_format(format));

  Matrix k;
  if (args.type == "laplacian") {
    const Graph* g = std::get_if<Graph>(&d);
    if (!g) throw ArgumentError("laplacian needs an edge_list input");
    k = normalized_laplacian(*g).entries();
  } else {
    const PointCloud* p = std::get_if<PointCloud>(&d);
    if (!p) throw ArgumentError(args.type + " needs a csv_points input");
    const PointCloud points = args.whiten ? whiten(*p).points : *p;
    if (args.type == "linear") {
      k = linear_kernel(points).entries();
    } else if (args.type == "rbf") {
      k = rbf_kernel(points, args.sigma).entries();
    } else if (args.type == "sparse-rbf") {
      const SparseRbfResult r = sparse_rbf_kernel(points, args.sigma, args.nu, args.cutoff);
      if (r.psd_not_guaranteed)
        std::fprintf(stderr, "warning: nu=%d is below (d+1)/2; positive semi-definiteness is not guaranteed\n", r.nu);
      k = r.kernel.entries();
    } else {
      throw ArgumentError("unknown kernel type '" + args.type + "'");
    }
  }
  with_output(args.out, [&](std::ostream& o) { write_matrix_market(o, k, args.drop_below); });
  return kExitOk;
}

int cmd_levscores(const LevArgs& args) {
  Dataset d = load_dataset(args.input, parse_data_format(args.format));
  const SpsdMatrix* a = std::get_if<SpsdMatrix>(&d);
  const PointCloud* x = std::get_if<PointCloud>(&d);
  if (!a && !x) throw ArgumentError("levscores needs a matrix_market or csv_points input");

  auto need_k = [&] {
    if (args.k < 1) throw ArgumentError("--k is required for --algo " + args.algo);
  };
  auto need_spsd = [&] {
    if (!a) throw ArgumentError("--algo " + args.algo + " needs a matrix_market input");
  };

  Vector scores;
  std::optional<ApproxLeverage> approx;
  if (args.algo == "exact") {
    if (a) {
      need_k();
      scores = leverage_scores(eigendecompose(*a, args.k)).scores;
    } else {
      scores = exact_tall_leverage(x->X);
    }
  } else if (args.algo == "tall") {
    TallOptions o;
    o.epsilon = args.epsilon;
    o.delta = args.delta;
    approx = approx_lev_tall(a ? a->entries() : x->X, o, args.seed);
  } else if (args.algo == "spec") {
    need_k();
    SpectralOptions o;
    o.epsilon = args.epsilon;
    o.delta = args.delta;
    o.q = args.q;
    approx = approx_lev_spectral(a ? a->entries() : x->X, args.k, o, args.seed);
  } else if (args.algo == "frob") {
    need_k();
    need_spsd();
    FrobOptions o;
    o.q = args.q.value_or(0);
    o.epsilon = args.epsilon;
    o.r = args.r;
    approx = approx_lev_frob(*a, args.k, o, args.seed);
  } else if (args.algo == "power") {
    need_k();
    need_spsd();
    PowerOptions o;
    o.tol = args.tol;
    o.max_iters = args.max_iters;
    approx = approx_lev_power(*a, args.k, o, args.seed);
  } else {
    throw ArgumentError("unknown --algo '" + args.algo + "'");
  }

  if (approx) {
    scores = approx->scores;
    std::fprintf(stderr, "algo=%s q=%d r1=%lld r2=%lld iterations=%d converged=%d fallback_exact=%d\n",
                 std::string(to_string(approx->algorithm)).c_str(), approx->q,
                 static_cast<long long>(approx->r1), static_cast<long long>(approx->r2),
                 approx->iterations_used, approx->converged ? 1 : 0, approx->fallback_exact ? 1 : 0);
  }
  with_output(args.out, [&](std::ostream& o) {
    o << "index,score\n";
    for (Index i = 0; i < scores.size(); ++i) o << i << ',' << scores(i) << '\n';
  });
  return kExitOk;
}

SketchMatrix make_sketch(const std::string& kind, const SpsdMatrix& a, const EigenPartition& e,
                         Index ell, std::uint64_t seed) {
  if (kind == "unif") return uniform_sketch(a.n(), ell, false, seed);
  if (kind == "lev") return leverage_sketch(leverage_distribution(leverage_scores(e)), ell, seed);
  if (kind == "gaussian") return gaussian_sketch(a.n(), ell, seed);
  if (kind == "srft") return srft_sketch(a.n(), ell, seed);
  throw ArgumentError("unknown --sketch '" + kind + "'");
}

SamplingScheme parse_scheme(const std::string& s) {
  for (SamplingScheme m : {SamplingScheme::leverage, SamplingScheme::srft, SamplingScheme::gaussian,
                           SamplingScheme::uniform, SamplingScheme::experimental})
    if (to_string(m) == s) return m;
  throw ArgumentError("unknown --scheme '" + s + "'");
}

int cmd_bounds(const BoundsArgs& args) {
  if (!args.check) {
    if (args.scheme.empty()) throw ArgumentError("bounds needs --check or --scheme");
    SampleSizeParams p;
    p.k = args.k;
    p.n = args.n;
    p.epsilon = args.epsilon;
    p.delta = args.delta;
    p.beta = args.beta;
    p.mu = args.mu;
    p.constants_to_one = args.constants_to_one;
    std::printf("%lld\n", static_cast<long long>(sample_size(parse_scheme(args.scheme), p)));
    return kExitOk;
  }

  if (args.input.empty()) throw ArgumentError("bounds --check needs --input");
  const SpsdMatrix a = load_spsd(args.input);
  if (args.k < 1 || args.k >= a.n()) throw ArgumentError("--k must lie in [1, n)");
  if (args.ell < args.k || args.ell > a.n()) throw ArgumentError("--ell must lie in [k, n]");
  const EigenPartition e = eigendecompose(a, args.k);
  const SketchMatrix s = make_sketch(args.sketch, a, e, args.ell, args.seed);
  const auto reports = certify(a, e, s, args.q);

  bool ok = true;
  std::printf("norm,observed,deterministic_rhs,crude_rhs,full_row_rank,certified\n");
  for (const BoundReport& r : reports) {
    const bool c = r.certified(args.slack * r.crude_rhs);
    ok = ok && c;
    std::printf("%s,%.17g,%.17g,%.17g,%d,%d\n", std::string(to_string(r.norm)).c_str(), r.observed,
                r.deterministic_rhs, r.crude_rhs, r.full_row_rank ? 1 : 0, c ? 1 : 0);
  }
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized low-rank approximation of SPSD matrices"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a sketching experiment from a JSON config");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", run.out, "Output directory for the CSV reports")->required();
  run_cmd->add_option("--threads", run.threads, "Worker threads (overrides the config)");
  run_cmd->add_flag("--predictors", run.predictors, "Also write predobs.csv");

  KernelArgs kern;
  auto* kernel_cmd = app.add_subcommand("kernel", "Build a kernel matrix and write it as MatrixMarket");
  kernel_cmd->add_option("--type", kern.type)
      ->required()
      ->check(CLI::IsMember({"linear", "rbf", "sparse-rbf", "laplacian"}));
  kernel_cmd->add_option("--input", kern.input, "Point CSV or edge list")->required();
  kernel_cmd->add_option("--format", kern.format)->check(CLI::IsMember({"csv_points", "edge_list"}));
  kernel_cmd->add_option("--sigma", kern.sigma, "RBF width");
  kernel_cmd->add_option("--nu", kern.nu, "Taper exponent of the sparse RBF kernel");
  kernel_cmd->add_option("--cutoff", kern.cutoff, "Support radius of the sparse RBF kernel");
  kernel_cmd->add_flag("--whiten", kern.whiten, "Center and normalize each feature first");
  kernel_cmd->add_option("--drop-below", kern.drop_below, "Omit entries with |a| at or below this");
  kernel_cmd->add_option("--out", kern.out, "Output file (stdout when omitted)");

  LevArgs lev;
  auto* lev_cmd = app.add_subcommand("levscores", "Exact or approximate leverage scores");
  lev_cmd->add_option("--algo", lev.algo)
      ->required()
      ->check(CLI::IsMember({"exact", "tall", "frob", "spec", "power"}));
  lev_cmd->add_option("--input", lev.input)->required();
  lev_cmd->add_option("--format", lev.format)->check(CLI::IsMember({"matrix_market", "csv_points"}));
  lev_cmd->add_option("--k", lev.k, "Target rank");
  lev_cmd->add_option("--epsilon", lev.epsilon);
  lev_cmd->add_option("--delta", lev.delta);
  lev_cmd->add_option("--q", lev.q, "Power exponent (spec, frob)");
  lev_cmd->add_option("--r", lev.r, "Projection width (frob)");
  lev_cmd->add_option("--tol", lev.tol, "Convergence tolerance (power)");
  lev_cmd->add_option("--max-iters", lev.max_iters, "Iteration cap (power)");
  lev_cmd->add_option("--seed", lev.seed);
  lev_cmd->add_option("--out", lev.out, "Output CSV (stdout when omitted)");

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Certify error bounds or evaluate sample sizes");
  bounds_cmd->add_flag("--check", bnd.check, "Sketch --input and check the structural bounds");
  bounds_cmd->add_option("--input", bnd.input, "MatrixMarket SPSD matrix");
  bounds_cmd->add_option("--k", bnd.k);
  bounds_cmd->add_option("--ell", bnd.ell);
  bounds_cmd->add_option("--q", bnd.q);
  bounds_cmd->add_option("--sketch", bnd.sketch)->check(CLI::IsMember({"unif", "lev", "gaussian", "srft"}));
  bounds_cmd->add_option("--seed", bnd.seed);
  bounds_cmd->add_option("--slack", bnd.slack, "Slack relative to ||A|| in each norm");
  bounds_cmd->add_option("--scheme", bnd.scheme, "Sample-size rule: leverage, srft, gaussian, uniform, experimental");
  bounds_cmd->add_option("--n", bnd.n);
  bounds_cmd->add_option("--epsilon", bnd.epsilon);
  bounds_cmd->add_option("--delta", bnd.delta);
  bounds_cmd->add_option("--beta", bnd.beta);
  bounds_cmd->add_option("--mu", bnd.mu, "Coherence (uniform rule)");
  bounds_cmd->add_flag("--constants-one", bnd.constants_to_one, "Set all absolute constants to one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*kernel_cmd) return cmd_kernel(kern);
    if (*lev_cmd) return cmd_levscores(lev);
    return cmd_bounds(bnd);
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const IoError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
}
