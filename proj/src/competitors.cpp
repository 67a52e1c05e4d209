#include "exi/competitors.hpp"

#include "exi/core.hpp"
#include "exi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exi {

double runs_estimator(const Series& x, double threshold, int r) {
  const Index n = x.size();
  if (r < 1) throw std::invalid_argument("runs_estimator: need r >= 1");
  if (n <= r)
    throw std::invalid_argument("runs_estimator: need more than r observations");
  Index exceedances = 0, declustered = 0;
  for (Index j = 0; j + r < n; ++j) {
    if (x[j] > threshold) ++exceedances;
    if (x[j] >= threshold) {
      bool run_below = true;
      for (Index i = j + 1; i <= j + r; ++i)
        if (x[i] > threshold) {
          run_below = false;
          break;
        }
      if (run_below) ++declustered;
    }
  }
  if (exceedances == 0)
    throw EstimationError("runs_estimator: no exceedance above " +
                          num_str(threshold));
  return static_cast<double>(declustered) / static_cast<double>(exceedances);
}

double ferro_segers(const Series& x, double threshold) {
  std::vector<Index> pos;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] > threshold) pos.push_back(i);
  const auto n_exc = pos.size();
  if (n_exc < 2)
    throw EstimationError("ferro_segers: need at least 2 exceedances, have " +
                          std::to_string(n_exc));

  // Inter-exceedance times, in observation counts.
  std::vector<double> gaps(n_exc - 1);
  double max_gap = 0.0;
  for (std::size_t i = 0; i + 1 < n_exc; ++i) {
    gaps[i] = static_cast<double>(pos[i + 1] - pos[i]);
    max_gap = std::max(max_gap, gaps[i]);
  }
  const auto m = static_cast<double>(gaps.size());
  double theta;
  if (max_gap <= 2.0) {
    double sum = 0.0, sum_sq = 0.0;
    for (const double t : gaps) {
      sum += t;
      sum_sq += t * t;
    }
    theta = 2.0 * sum * sum / (m * sum_sq);
  } else {
    // Bias-corrected form; with some gap >= 3 the denominator is positive.
    double sum = 0.0, sum_prod = 0.0;
    for (const double t : gaps) {
      sum += t - 1.0;
      sum_prod += (t - 1.0) * (t - 2.0);
    }
    theta = 2.0 * sum * sum / (m * sum_prod);
  }
  return std::min(theta, 1.0);
}

std::vector<double> default_quantile_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 19; ++i) grid.push_back(0.90 + 0.005 * i);
  return grid;
}

std::vector<SweepRow> threshold_sweep(const Series& x,
                                      std::span<const double> quantiles,
                                      const EstimatorSpec& spec) {
  if (x.size() < 2) throw std::invalid_argument("threshold_sweep: series too short");
  if (quantiles.empty())
    throw std::invalid_argument("threshold_sweep: no quantiles given");
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end());

  std::vector<SweepRow> rows;
  const auto run_one = [&](double q, double u, const std::string& name,
                           const std::string& param, auto&& estimate) {
    SweepRow row{q, u, name, param, 0.0, {}};
    try {
      row.estimate = estimate();
    } catch (const EstimationError& e) {
      row.error = e.what();
    } catch (const std::invalid_argument& e) {
      // e.g. a runs window longer than the series at this grid point
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  };

  for (const double q : quantiles) {
    const double u = quantile_sorted(sorted, q);
    if (spec.runs)
      for (const int r : spec.r_values)
        run_one(q, u, "runs", std::to_string(r),
                [&] { return runs_estimator(x, u, r); });
    if (spec.ferro_segers)
      run_one(q, u, "ferro-segers", "-", [&] { return ferro_segers(x, u); });
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "quantile,threshold,estimator,parameter,estimate,error\n";
  for (const auto& row : rows) {
    out << num_str(row.quantile) << ',' << num_str(row.threshold) << ','
        << row.estimator << ',' << row.parameter << ',';
    if (row.error.empty()) out << num_str(row.estimate);
    std::string err = row.error;  // keep the cell comma-free
    std::replace(err.begin(), err.end(), ',', ';');
    out << ',' << err << '\n';
  }
  return out.str();
}

}  // namespace exi
