#include "spsd/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "spsd/error.hpp"

namespace spsd {
namespace {

constexpr NormKind kNorms[3] = {NormKind::spectral, NormKind::frobenius, NormKind::trace};

// Table-3 style evaluation: probability parameter fixed at one half.
constexpr double kPredictorDelta = 0.5;

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

void check_stream(std::ostream& out, const char* what) {
  if (!out) throw IoError(std::string("write failed: ") + what);
}

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Predictors {
  SamplingScheme scheme;
  std::vector<Predictor> list;
};

Predictors predictors_for(HarnessMethod m) {
  switch (m) {
    case HarnessMethod::unif:
      return {SamplingScheme::uniform,
              {Predictor::uniform, Predictor::belabbas_wolfe, Predictor::kumar_mohri_talwalkar}};
    case HarnessMethod::gaussian: return {SamplingScheme::gaussian, {Predictor::gaussian}};
    case HarnessMethod::srft: return {SamplingScheme::srft, {Predictor::srft}};
    default: return {SamplingScheme::leverage, {Predictor::leverage}};
  }
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<HarnessMethod, ApproxMode, Index>;
  std::vector<Key> order;
  std::map<Key, std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    const Key key{r.method, r.mode, r.ell};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const Key& key : order) {
    const auto& group = groups.at(key);
    for (NormKind norm : kNorms) {
      SummaryRow row;
      std::tie(row.method, row.mode, row.ell) = key;
      row.norm = norm;
      double sum = 0.0;
      for (const TrialRecord* r : group) {
        if (!r->error.empty()) {
          ++row.failed;
          continue;
        }
        const double v = select(r->ratios, norm);
        row.min = row.count ? std::min(row.min, v) : v;
        row.max = row.count ? std::max(row.max, v) : v;
        sum += v;
        ++row.count;
      }
      row.mean = row.count ? sum / static_cast<double>(row.count) : std::numeric_limits<double>::quiet_NaN();
      if (!row.count) row.min = row.max = row.mean;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<PredObsRow> predicted_vs_observed(const ExperimentResult& result) {
  using Key = std::pair<HarnessMethod, Index>;
  std::vector<Key> order;
  std::map<Key, std::pair<NormTriple, std::size_t>> sums;
  for (const TrialRecord& r : result.records) {
    if (r.mode != ApproxMode::full || !r.error.empty()) continue;
    const Key key{r.method, r.ell};
    auto [it, inserted] = sums.try_emplace(key, NormTriple{}, 0);
    if (inserted) order.push_back(key);
    it->second.first.spectral += r.errors.spectral;
    it->second.first.frobenius += r.errors.frobenius;
    it->second.first.trace += r.errors.trace;
    ++it->second.second;
  }

  std::vector<PredObsRow> rows;
  for (const Key& key : order) {
    const auto& [total, count] = sums.at(key);
    const Predictors preds = predictors_for(key.first);
    SampleSizeParams sp;
    sp.k = result.k;
    sp.n = result.n;
    sp.delta = kPredictorDelta;
    sp.mu = result.coherence;
    sp.constants_to_one = true;
    const double eps = epsilon_for_samples(preds.scheme, key.second, sp);
    StochasticParams p;
    p.k = result.k;
    p.n = result.n;
    p.ell = key.second;
    p.epsilon = eps;
    p.delta = kPredictorDelta;
    p.gamma = result.gamma;
    p.q = result.q;
    for (Predictor pred : preds.list) {
      for (NormKind norm : kNorms) {
        double predicted = 0.0;
        try {
          predicted = stochastic_bound(pred, norm, result.spectrum, p, true);
        } catch (const UnsupportedError&) {
          continue;
        }
        PredObsRow row;
        row.method = key.first;
        row.ell = key.second;
        row.predictor = pred;
        row.norm = norm;
        row.epsilon = eps;
        row.predicted = predicted;
        row.observed = select(total, norm) / static_cast<double>(count);
        row.ratio = row.predicted / row.observed;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "method,mode,ell,trial,spectral_ratio,frobenius_ratio,trace_ratio,dist_time_s,"
         "sketch_time_s,approx_time_s,full_row_rank\n";
  for (const TrialRecord& r : records) {
    out << to_string(r.method) << ',' << to_string(r.mode) << ',' << r.ell << ',' << r.trial << ',';
    if (r.error.empty())
      out << r.ratios.spectral << ',' << r.ratios.frobenius << ',' << r.ratios.trace << ',';
    else
      out << "nan,nan,nan,";
    out << r.times.distribution << ',' << r.times.sketch << ',' << r.times.approx << ','
        << (r.full_row_rank ? 1 : 0) << '\n';
  }
  check_stream(out, "trials");
}

void write_failures_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "method,mode,ell,trial,error\n";
  for (const TrialRecord& r : records)
    if (!r.error.empty())
      out << to_string(r.method) << ',' << to_string(r.mode) << ',' << r.ell << ',' << r.trial << ','
          << csv_escape(r.error) << '\n';
  check_stream(out, "failures");
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "method,mode,ell,norm,min,mean,max,trials,failed\n";
  for (const SummaryRow& r : rows)
    out << to_string(r.method) << ',' << to_string(r.mode) << ',' << r.ell << ',' << to_string(r.norm)
        << ',' << r.min << ',' << r.mean << ',' << r.max << ',' << r.count << ',' << r.failed << '\n';
  check_stream(out, "summary");
}

void write_plot_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  std::vector<const SummaryRow*> sorted;
  for (const SummaryRow& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const SummaryRow* a, const SummaryRow* b) {
    return std::tie(a->method, a->mode, a->norm, a->ell) < std::tie(b->method, b->mode, b->norm, b->ell);
  });
  out << "method,mode,norm,ell,mean_ratio\n";
  for (const SummaryRow* r : sorted)
    out << to_string(r->method) << ',' << to_string(r->mode) << ',' << to_string(r->norm) << ','
        << r->ell << ',' << r->mean << '\n';
  check_stream(out, "plot");
}

void write_predobs_csv(std::ostream& out, const std::vector<PredObsRow>& rows) {
  out << "method,ell,predictor,norm,epsilon,predicted,observed,pred_obs\n";
  for (const PredObsRow& r : rows)
    out << to_string(r.method) << ',' << r.ell << ',' << to_string(r.predictor) << ','
        << to_string(r.norm) << ',' << r.epsilon << ',' << r.predicted << ',' << r.observed << ','
        << r.ratio << '\n';
  check_stream(out, "predobs");
}

void report(const ExperimentResult& result, bool predictors, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto rows = summarize(result.records);
  {
    auto out = open_out(dir / "trials.csv");
    write_trials_csv(out, result.records);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, rows);
  }
  {
    auto out = open_out(dir / "plot.csv");
    write_plot_csv(out, rows);
  }
  if (std::any_of(result.records.begin(), result.records.end(),
                  [](const TrialRecord& r) { return !r.error.empty(); })) {
    auto out = open_out(dir / "failures.csv");
    write_failures_csv(out, result.records);
  }
  if (predictors) {
    auto out = open_out(dir / "predobs.csv");
    write_predobs_csv(out, predicted_vs_observed(result));
  }
}

}  // namespace spsd
