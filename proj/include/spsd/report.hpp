#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "spsd/experiment.hpp"

namespace spsd {

struct SummaryRow {
  HarnessMethod method = HarnessMethod::unif;
  ApproxMode mode = ApproxMode::full;
  Index ell = 0;
  NormKind norm = NormKind::spectral;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::size_t failed = 0;
};

/// min/mean/max ratio per (method, mode, ell, norm), over successful trials.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

struct PredObsRow {
  HarnessMethod method = HarnessMethod::unif;
  Index ell = 0;
  Predictor predictor = Predictor::uniform;
  NormKind norm = NormKind::spectral;
  double epsilon = 0.0;
  double predicted = 0.0;
  double observed = 0.0;
  double ratio = 0.0;
};

/// Predicted over mean observed error for full-mode cells, with all constants
/// set to one, delta = 1/2 and epsilon solved from the sample-size rule at ell.
std::vector<PredObsRow> predicted_vs_observed(const ExperimentResult& result);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// method,mode,ell,trial,error for the trials that failed.
void write_failures_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_plot_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_predobs_csv(std::ostream& out, const std::vector<PredObsRow>& rows);

/// Writes trials.csv, summary.csv, plot.csv, failures.csv (only when a trial
/// failed) and, with predictors, predobs.csv into dir.
void report(const ExperimentResult& result, bool predictors, const std::filesystem::path& dir);

}  // namespace spsd
