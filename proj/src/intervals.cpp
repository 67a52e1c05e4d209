#include "exi/intervals.hpp"

#include "exi/core.hpp"
#include "exi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace exi {

namespace {

void check_level(double level) {
  if (!(level > 0.0) || !(level < 1.0))
    throw std::invalid_argument("confidence level must be in (0, 1)");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

ConfidenceInterval ci_normal(double theta_hat, Index n_j, double level,
                             std::string provenance) {
  check_level(level);
  if (!(theta_hat >= 0.0) || !(theta_hat <= 1.0))
    throw std::invalid_argument("ci_normal: need theta_hat in [0, 1]");
  if (n_j < 1) throw std::invalid_argument("ci_normal: need n_j >= 1");
  // Var(theta_hat) ~ theta^2 pi^2 / (6 n_j): delta method through the
  // Gumbel variance pi^2/6 of a log 1-Frechet block maximum.
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * theta_hat * std::numbers::pi *
                      std::sqrt(1.0 / (6.0 * static_cast<double>(n_j)));
  if (provenance.empty())
    provenance = "n_j=" + std::to_string(n_j);
  return {CiKind::normal, level, clamp01(theta_hat - half),
          clamp01(theta_hat + half), std::move(provenance)};
}

ConfidenceInterval ci_quantile(std::span<const double> pooled, double level,
                               std::string provenance) {
  check_level(level);
  if (pooled.empty()) throw std::invalid_argument("ci_quantile: empty sample");
  std::vector<double> sorted(pooled.begin(), pooled.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = quantile_sorted(sorted, 0.5 * (1.0 - level));
  const double hi = quantile_sorted(sorted, 0.5 * (1.0 + level));
  if (provenance.empty())
    provenance = std::to_string(pooled.size()) + " samples";
  return {CiKind::quantile, level, clamp01(lo), clamp01(hi),
          std::move(provenance)};
}

std::string interval_csv_row(const ConfidenceInterval& ci) {
  std::ostringstream out;
  out << (ci.kind == CiKind::normal ? "normal" : "quantile") << ','
      << num_str(ci.level) << ',' << num_str(ci.lo) << ',' << num_str(ci.hi)
      << ',' << ci.provenance;
  return out.str();
}

}  // namespace exi
