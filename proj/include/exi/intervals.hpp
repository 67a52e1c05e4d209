#pragma once

#include "exi/types.hpp"

#include <span>
#include <string>

namespace exi {

enum class CiKind { normal, quantile };

struct ConfidenceInterval {
  CiKind kind = CiKind::normal;
  double level = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string provenance;  // where the interval came from, for reports
};

/// Asymptotic interval theta_hat +/- z_{(1+level)/2} * theta_hat * pi *
/// sqrt(1 / (6 n_j)), endpoints clamped into [0, 1]; n_j is the number of
/// blocks at the scale the estimate came from. Width shrinks like
/// 1 / sqrt(n_j).
ConfidenceInterval ci_normal(double theta_hat, Index n_j, double level,
                             std::string provenance = {});

/// Empirical ((1-level)/2, (1+level)/2) quantiles of the pooled theta
/// samples (linear interpolation between order statistics), clamped into
/// [0, 1].
ConfidenceInterval ci_quantile(std::span<const double> pooled, double level,
                               std::string provenance = {});

/// "kind,level,lo,hi,provenance" row (no header).
std::string interval_csv_row(const ConfidenceInterval& ci);

}  // namespace exi
