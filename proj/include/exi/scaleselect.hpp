#pragma once

#include "exi/resample.hpp"
#include "exi/types.hpp"

#include <string>
#include <vector>

namespace exi {

struct KwResult {
  double h = 0.0;  // tie-corrected statistic
  double p = 1.0;  // chi-squared upper-tail probability, df = groups - 1
};

/// Kruskal-Wallis k-sample rank test with mid-ranks for ties and the
/// standard tie correction. When every pooled value is identical the
/// statistic is taken as 0 and p as 1. Needs >= 2 nonempty groups.
KwResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Exact permutation p-value (same tie-corrected statistic), feasible for
/// pooled sizes up to ~10; a test-side oracle for the chi-squared
/// approximation.
double kruskal_wallis_exact_p(const std::vector<std::vector<double>>& groups);

/// Upper-triangular table of p(j1, j2) = kruskal_wallis over the theta
/// sample groups at scales j1..j2, for j_lo <= j1 < j2 <= j_hi.
struct PValueMatrix {
  int j_lo = 0;
  int j_hi = 0;
  Matrix p;  // (width x width); (r, c) = p(j_lo + r, j_lo + c), NaN for r >= c

  int width() const noexcept { return j_hi - j_lo + 1; }
  double at(int j1, int j2) const;
};

/// Every scale in [j_lo, j_hi] must be present in `samples`; j_lo < j_hi.
PValueMatrix pvalue_matrix(const ThetaSamples& samples, int j_lo, int j_hi);

/// Default tested window: scales 3 .. floor(log2 n) - 2.
struct ScaleRange {
  int j_lo = 0;
  int j_hi = 0;
  bool fallback = false;  // no range passed; middle scale returned instead
};

/// Longest range with p >= threshold; ties broken toward the lowest j1.
/// When nothing passes, falls back to the single lower-middle scale of the
/// window (fallback flag set) - callers should surface that for inspection.
/// Depends on the matrix only through the thresholded mask.
ScaleRange select_range(const PValueMatrix& m, double threshold = 0.05);

/// Heat-map CSV: rows j1 = j_lo..j_hi-1, columns j2 = j_lo+1..j_hi, cells
/// empty where j1 >= j2. The mask variant holds 1 exactly where
/// p >= threshold.
std::string heatmap_csv(const PValueMatrix& m);
std::string heatmap_mask_csv(const PValueMatrix& m, double threshold);

}  // namespace exi
