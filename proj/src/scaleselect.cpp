#include "exi/scaleselect.hpp"

#include "exi/core.hpp"
#include "exi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace exi {

namespace {

// Mid-ranks of the pooled sample (1-based), plus the tie correction factor
// 1 - sum(t^3 - t) / (N^3 - N). Returns correction 0 when all values tie.
double assign_midranks(const std::vector<double>& pooled,
                       std::vector<double>& ranks) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
  ranks.assign(n, 0.0);
  double tie_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mid-rank
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    const auto t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  const auto nn = static_cast<double>(n);
  return 1.0 - tie_sum / (nn * nn * nn - nn);
}

double kw_statistic(const std::vector<double>& ranks,
                    const std::vector<std::size_t>& sizes, double correction) {
  const auto n = static_cast<double>(ranks.size());
  double h = 0.0;
  std::size_t offset = 0;
  for (const std::size_t size : sizes) {
    double rsum = 0.0;
    for (std::size_t k = 0; k < size; ++k) rsum += ranks[offset + k];
    h += rsum * rsum / static_cast<double>(size);
    offset += size;
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  return h / correction;
}

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2)
    throw std::invalid_argument("kruskal_wallis: need at least 2 groups");
  for (const auto& g : groups)
    if (g.empty())
      throw std::invalid_argument("kruskal_wallis: empty group");
}

}  // namespace

KwResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
    sizes.push_back(g.size());
  }
  std::vector<double> ranks;
  const double correction = assign_midranks(pooled, ranks);
  if (correction <= 0.0) return {0.0, 1.0};  // every pooled value identical
  const double h = kw_statistic(ranks, sizes, correction);
  const auto df = static_cast<double>(groups.size() - 1);
  return {h, chi_squared_sf(h, df)};
}

double kruskal_wallis_exact_p(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
    sizes.push_back(g.size());
  }
  const std::size_t n = pooled.size();
  if (n > 10)
    throw std::invalid_argument("kruskal_wallis_exact_p: pooled size > 10");

  std::vector<double> ranks;
  const double correction = assign_midranks(pooled, ranks);
  if (correction <= 0.0) return 1.0;
  const double h_obs = kw_statistic(ranks, sizes, correction);

  // Enumerate every assignment of the pooled ranks to groups of the given
  // sizes (equivalently every distinct permutation of group labels).
  std::vector<double> arrangement(n);
  std::vector<bool> used(n, false);
  long long total = 0, at_least = 0;
  const double tol = 1e-9;

  // Fills group g starting from pooled index `from` to keep combinations
  // (within a group, order does not matter) from being double counted.
  auto recurse = [&](auto&& self, std::size_t g, std::size_t from,
                     std::size_t filled, std::size_t offset) -> void {
    if (filled == sizes[g]) {
      if (g + 1 == sizes.size()) {
        const double h = kw_statistic(arrangement, sizes, correction);
        ++total;
        if (h >= h_obs - tol) ++at_least;
        return;
      }
      self(self, g + 1, 0, 0, offset + sizes[g]);
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      arrangement[offset + filled] = ranks[i];
      self(self, g, i + 1, filled + 1, offset);
      used[i] = false;
    }
  };
  recurse(recurse, 0, 0, 0, 0);
  return static_cast<double>(at_least) / static_cast<double>(total);
}

double PValueMatrix::at(int j1, int j2) const {
  if (j1 < j_lo || j2 > j_hi || j1 >= j2)
    throw std::invalid_argument("p-value matrix: need j_lo <= j1 < j2 <= j_hi");
  return p(j1 - j_lo, j2 - j_lo);
}

PValueMatrix pvalue_matrix(const ThetaSamples& samples, int j_lo, int j_hi) {
  if (j_lo >= j_hi)
    throw std::invalid_argument("pvalue_matrix: need j_lo < j_hi");
  PValueMatrix m;
  m.j_lo = j_lo;
  m.j_hi = j_hi;
  const int w = m.width();
  m.p = Matrix::Constant(w, w, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::vector<double>> groups;
  for (int j1 = j_lo; j1 < j_hi; ++j1) {
    groups.clear();
    groups.push_back(samples.column(j1));
    for (int j2 = j1 + 1; j2 <= j_hi; ++j2) {
      groups.push_back(samples.column(j2));
      m.p(j1 - j_lo, j2 - j_lo) = kruskal_wallis(groups).p;
    }
  }
  return m;
}

ScaleRange select_range(const PValueMatrix& m, double threshold) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0))
    throw std::invalid_argument("select_range: need 0 <= threshold <= 1");
  int best_len = -1, best_j1 = 0, best_j2 = 0;
  for (int j1 = m.j_lo; j1 < m.j_hi; ++j1)
    for (int j2 = j1 + 1; j2 <= m.j_hi; ++j2)
      if (m.at(j1, j2) >= threshold && j2 - j1 > best_len) {
        best_len = j2 - j1;
        best_j1 = j1;
        best_j2 = j2;
      }
  if (best_len >= 0) return {best_j1, best_j2, false};
  const int mid = m.j_lo + (m.width() - 1) / 2;  // lower middle of the window
  return {mid, mid, true};
}

namespace {

std::string heatmap_grid(const PValueMatrix& m, bool mask, double threshold) {
  std::ostringstream out;
  out << "j1\\j2";
  for (int j2 = m.j_lo + 1; j2 <= m.j_hi; ++j2) out << ',' << j2;
  out << '\n';
  for (int j1 = m.j_lo; j1 < m.j_hi; ++j1) {
    out << j1;
    for (int j2 = m.j_lo + 1; j2 <= m.j_hi; ++j2) {
      out << ',';
      if (j1 >= j2) continue;
      const double p = m.at(j1, j2);
      if (mask)
        out << (p >= threshold ? 1 : 0);
      else
        out << num_str(p);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string heatmap_csv(const PValueMatrix& m) {
  return heatmap_grid(m, false, 0.0);
}

std::string heatmap_mask_csv(const PValueMatrix& m, double threshold) {
  return heatmap_grid(m, true, threshold);
}

}  // namespace exi
