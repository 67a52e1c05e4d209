#pragma once

#include "exi/maxspec.hpp"
#include "exi/rng.hpp"
#include "exi/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace exi {

enum class ResampleScheme { permutation, bootstrap };
enum class SlopeMethod { wls, gls };

/// Resampling estimator configuration. Defaults match data analysis
/// (n_in = 1, n_out = 200); simulation studies typically raise n_in to 25
/// and n_out to 500.
struct ResampleConfig {
  ResampleScheme scheme = ResampleScheme::permutation;
  Index k = 0;          // resample length; 0 means the input length
  int n_in = 1;         // resamples averaged into each Delta
  int n_out = 200;      // outer iterations = theta samples per scale
  std::uint64_t seed = 0;
  unsigned threads = 1; // outer-loop workers; results are thread-count invariant
  bool median_delta = false;  // median instead of mean over positive differences

  void validate(Index n) const;
};

/// Draws one resample: permutation takes a uniform k-subset of x in random
/// order (k = n is a full shuffle, the default and the scheme that exactly
/// preserves the marginal); bootstrap draws k values with replacement.
Series resample_series(const Series& x, ResampleScheme scheme, Index k,
                       SplitMix64& rng);

/// Positive-part location statistic behind Delta(j): the mean (or median) of
/// the strictly positive entries of diffs, 0 when there are none.
double delta_statistic(std::span<const double> diffs, bool use_median);

/// Per-scale resampling estimates of the extremal index.
struct ThetaSamples {
  std::vector<int> scales;  // ascending; the usable scales of the input
  Vector alpha;             // alpha_hat per scale, aligned with `scales`
  Vector y;                 // original-spectrum Y_j per scale
  Matrix theta;             // n_out x scales.size(); entries in (0, 1]

  int scale_index(int j) const noexcept;  // -1 when j is absent
  std::vector<double> column(int j) const;
  std::vector<double> pooled(int j_lo, int j_hi) const;
};

/// The resampling estimator: for each outer iteration o, Delta(j) aggregates
/// the positive excesses of the n_in resampled spectra over the original at
/// scale j, and theta(o, j) = min(2^{-alpha_hat(j) Delta(j)}, 1). Resample
/// (o, t) draws from substream fold_in(fold_in(seed, o), t). Scales are the
/// input's usable scales (capped at floor(log2 k)); the input must have at
/// least 3 valid scales and at least 1 usable one.
ThetaSamples algorithm1(const Series& x, const ResampleConfig& cfg,
                        SlopeMethod method);

/// Same resampling pass evaluated under several slope methods at once: the
/// theta(j) samples differ only through alpha_hat(j), so the (dominant)
/// resampling cost is shared. Results are identical to repeated algorithm1
/// calls with the same config.
std::vector<ThetaSamples> algorithm1_multi(const Series& x,
                                           const ResampleConfig& cfg,
                                           std::span<const SlopeMethod> methods);

/// Median of the samples pooled over scales j_lo..j_hi (all must be present).
double point_estimate(const ThetaSamples& samples, int j_lo, int j_hi);

/// Long-format export, header "scale,iteration,theta", iteration 1-based,
/// ordered by scale then iteration.
std::string theta_csv(const ThetaSamples& samples);

/// Five-number summaries per scale, header "scale,q05,q25,median,q75,q95".
std::string boxplot_csv(const ThetaSamples& samples);

}  // namespace exi
