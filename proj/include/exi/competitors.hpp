#pragma once

#include "exi/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace exi {

/// Runs declustering estimate: the fraction of exceedances (restricted to
/// j <= n - r) followed by a run of r values at or below the threshold,
///
///   #{ j : X_j >= u >= max(X_{j+1}..X_{j+r}) } / #{ j : X_j > u },
///
/// keeping the >= / > asymmetry of the classical definition. Throws
/// EstimationError when there is no exceedance to condition on.
double runs_estimator(const Series& x, double threshold, int r);

/// Ferro-Segers intervals estimate from the gaps T_i between successive
/// exceedance positions: the first-moment form when every gap is <= 2, the
/// bias-corrected form otherwise, clamped to at most 1. Needs at least two
/// exceedances.
double ferro_segers(const Series& x, double threshold);

struct EstimatorSpec {
  bool runs = true;
  std::vector<int> r_values = {1, 5, 9};
  bool ferro_segers = true;
};

struct SweepRow {
  double quantile = 0.0;
  double threshold = 0.0;
  std::string estimator;  // "runs" or "ferro-segers"
  std::string parameter;  // r for runs, "-" otherwise
  double estimate = 0.0;  // meaningless when error is nonempty
  std::string error;      // empty on success
};

/// Runs every configured estimator at the empirical quantile thresholds.
/// Estimation failures become rows with the error column set; only
/// malformed inputs throw.
std::vector<SweepRow> threshold_sweep(const Series& x,
                                      std::span<const double> quantiles,
                                      const EstimatorSpec& spec);

/// Default sweep grid: quantiles 0.90 .. 0.995 step 0.005.
std::vector<double> default_quantile_grid();

/// Header "quantile,threshold,estimator,parameter,estimate,error".
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace exi
