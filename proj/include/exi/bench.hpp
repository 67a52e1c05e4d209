#pragma once

#include "exi/intervals.hpp"
#include "exi/resample.hpp"
#include "exi/simulate.hpp"
#include "exi/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace exi {

/// One simulated process in a study, with its path length.
struct ProcessEntry {
  ProcessSpec spec;
  Index n = 8192;
};

/// Monte Carlo study configuration. Replicate r of process p draws all its
/// randomness from substreams of fold_in(fold_in(seed, p), r), so results
/// are independent of scheduling; aggregation always runs in replicate
/// order. The desk preset (replicates=100, n_out=100, n_in=5) keeps studies
/// in the minutes range; the full preset (500/500/25) reproduces
/// publication-scale settings.
struct StudyConfig {
  std::vector<ProcessEntry> processes;
  int replicates = 100;
  ResampleScheme scheme = ResampleScheme::permutation;
  int n_in = 5;
  int n_out = 100;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<SlopeMethod> methods = {SlopeMethod::wls};

  // Competitor estimators (rmse study only).
  bool with_runs = false;
  std::vector<int> runs_r = {1, 5, 9};
  bool with_ferro_segers = false;
  std::vector<double> quantiles;  // empty = default 0.90..0.995 step 0.005

  // Scale-selection (autoselect study).
  double kw_threshold = 0.05;

  // Coverage study.
  int coverage_scale_lo = 4;
  int coverage_scale_hi = 8;
  std::vector<double> levels = {0.90, 0.95};

  void validate() const;
  void apply_preset(const std::string& name);  // "desk" or "paper"
};

/// Parses a JSON study configuration (documented in the README); unknown
/// keys are rejected. Throws std::invalid_argument with the offending key.
StudyConfig parse_study_config(const std::string& path);

/// One estimator variant at one tuning setting for one process.
struct TuningResult {
  std::string process;
  double theta_true = 0.0;
  std::string estimator;  // "maxspec-wls", "maxspec-gls", "runs-r5", ...
  std::string tuning;     // "scale=6", "q=0.99", "q=0.99,r=5", "auto"
  int used = 0;           // replicates contributing (estimator defined)
  double rmse = 0.0;
  double bias = 0.0;
  double variance = 0.0;  // population variance; rmse^2 = bias^2 + variance
  double median_est = 0.0;
  double sd = 0.0;
  bool best = false;      // argmin-RMSE tuning within its estimator family
};

/// Best-over-tuning RMSE comparison of the resampling estimator (per scale)
/// against the runs and intervals competitors (per threshold).
std::vector<TuningResult> run_rmse_study(const StudyConfig& cfg);

/// Automatic scale selection per replicate (window 3..floor(log2 n)-2),
/// reported as tuning "auto" alongside the per-scale rows of the same runs;
/// the best fixed scale carries the `best` flag.
std::vector<TuningResult> run_autoselect_study(const StudyConfig& cfg);

struct CoverageRow {
  std::string process;
  double theta_true = 0.0;
  CiKind kind = CiKind::normal;
  double level = 0.0;
  int scale = 0;
  int used = 0;
  double coverage_pct = 0.0;
};

/// Empirical CI coverage per scale and level, both constructions.
std::vector<CoverageRow> run_coverage_study(const StudyConfig& cfg);

std::string tuning_csv(const std::vector<TuningResult>& rows);
std::string coverage_csv(const std::vector<CoverageRow>& rows);

}  // namespace exi
