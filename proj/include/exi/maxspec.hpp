#pragma once

#include "exi/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace exi {

/// Per-scale summary of dyadic block maxima. Scale j covers disjoint blocks
/// of 2^j consecutive observations; blocks(j) = floor(n / 2^j) of them fit.
/// y(j) is the mean of log2 block maxima, defined only where every block
/// maximum at that scale is strictly positive (valid(j)).
class MaxSpectrum {
 public:
  MaxSpectrum(Index n, Vector y, std::vector<std::uint8_t> valid);

  /// Number of observations the spectrum was computed from.
  Index n() const noexcept { return n_; }

  /// Largest scale, floor(log2 n). Scales are 1-based: j = 1..num_scales().
  int num_scales() const noexcept { return static_cast<int>(y_.size()); }

  Index blocks(int j) const { return n_ >> check_scale(j); }
  bool valid(int j) const { return valid_[static_cast<size_t>(check_scale(j)) - 1] != 0; }

  /// Mean log2 block maximum at scale j; NaN when !valid(j).
  double y(int j) const { return y_[check_scale(j) - 1]; }

 private:
  int check_scale(int j) const;

  Index n_;
  Vector y_;
  std::vector<std::uint8_t> valid_;
};

/// Computes the max-spectrum of x (size >= 2). Block maxima are built as a
/// dyadic pyramid: each scale-(j+1) maximum is the max of an adjacent pair of
/// scale-j maxima, trailing remainders discarded per scale.
MaxSpectrum max_spectrum(const Series& x);

/// Scales j where a tail-index regression over j..top is possible: every
/// level j..top is valid, with top = num_scales() - 1 (the largest scale is
/// dropped as a lone-block artifact). Ascending; may be empty.
std::vector<int> usable_scales(const MaxSpectrum& spec);

/// Regression weights over scales j_start..j_start+ell, normalized so the
/// weighted sum of an affine spectrum y_j = j/alpha + c equals 1/alpha:
/// sum w_i = 0 and sum i*w_i = 1 (both within 1e-12 by construction).
struct WeightVector {
  int j_start = 0;
  Vector w;  // size ell + 1
};

/// Generalized least squares slope weights for covariance `cov` of
/// (Y_j, ..., Y_{j+ell}). cov must be symmetric positive definite.
WeightVector gls_weights(int j_start, int ell, const Matrix& cov);

/// Weighted least squares weights with Var(Y_{j+i}) taken proportional to
/// 2^{j+i} (the scale-doubling variance profile); the default method.
WeightVector wls_weights(int j_start, int ell);

/// Monte Carlo covariance of (Y_1..Y_J) for iid standard 1-Frechet series of
/// length n, estimated from `replicates` simulations with a fixed internal
/// seed, cached per n (thread-safe). Slices of this matrix feed gls_weights.
Matrix spectrum_covariance(Index n, int replicates = 2000);

/// Tail index estimate 1 / (sum_i w_i * Y_{j_start+i}). Every level in the
/// weight range must be valid; throws EstimationError on a non-positive
/// slope estimate.
double alpha_hat(const MaxSpectrum& spec, const WeightVector& weights);

/// Scale-standardized spectrum C(j) = Y_j - j / alpha.
double c_statistic(const MaxSpectrum& spec, int j, double alpha);

/// CSV export: header "j,n_j,Y_j,valid"; Y_j empty where invalid.
std::string spectrum_csv(const MaxSpectrum& spec);

}  // namespace exi
