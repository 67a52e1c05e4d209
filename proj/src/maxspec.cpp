#include "exi/maxspec.hpp"

#include "exi/core.hpp"
#include "exi/rng.hpp"
#include "exi/simulate.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace exi {

namespace {

int floor_log2(Index n) {
  return 63 - std::countl_zero(static_cast<std::uint64_t>(n));
}

}  // namespace

// ---------------------------------------------------------------------------
// MaxSpectrum
// ---------------------------------------------------------------------------

MaxSpectrum::MaxSpectrum(Index n, Vector y, std::vector<std::uint8_t> valid)
    : n_(n), y_(std::move(y)), valid_(std::move(valid)) {
  if (n_ < 2 || y_.size() != static_cast<Index>(valid_.size()) ||
      y_.size() != floor_log2(n_))
    throw std::invalid_argument("MaxSpectrum: inconsistent dimensions");
}

int MaxSpectrum::check_scale(int j) const {
  if (j < 1 || j > num_scales())
    throw std::invalid_argument("scale " + std::to_string(j) +
                                " outside 1.." + std::to_string(num_scales()));
  return j;
}

MaxSpectrum max_spectrum(const Series& x) {
  const Index n = x.size();
  if (n < 2)
    throw EstimationError("max_spectrum: need at least 2 observations");
  const int J = floor_log2(n);
  Vector y(J);
  std::vector<std::uint8_t> valid(static_cast<std::size_t>(J));

  // Dyadic pyramid: maxima of scale j+1 come from adjacent pairs of scale-j
  // maxima; the trailing remainder of each scale is discarded independently.
  std::vector<double> level(static_cast<std::size_t>(n >> 1));
  for (int j = 1; j <= J; ++j) {
    const Index nb = n >> j;
    if (j == 1) {
      for (Index k = 0; k < nb; ++k)
        level[static_cast<std::size_t>(k)] = std::max(x[2 * k], x[2 * k + 1]);
    } else {
      for (Index k = 0; k < nb; ++k)
        level[static_cast<std::size_t>(k)] =
            std::max(level[static_cast<std::size_t>(2 * k)],
                     level[static_cast<std::size_t>(2 * k + 1)]);
    }
    bool ok = true;
    for (Index k = 0; k < nb; ++k)
      if (!(level[static_cast<std::size_t>(k)] > 0.0)) {
        ok = false;
        break;
      }
    valid[static_cast<std::size_t>(j) - 1] = ok ? 1 : 0;
    if (ok) {
      double acc = 0.0;
      for (Index k = 0; k < nb; ++k)
        acc += std::log2(level[static_cast<std::size_t>(k)]);
      y[j - 1] = acc / static_cast<double>(nb);
    } else {
      y[j - 1] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return MaxSpectrum(n, std::move(y), std::move(valid));
}

std::vector<int> usable_scales(const MaxSpectrum& spec) {
  const int top = spec.num_scales() - 1;
  std::vector<int> out;
  // Walk down from the top used scale; validity must hold contiguously.
  int lowest = top + 1;
  for (int j = top; j >= 1; --j) {
    if (!spec.valid(j)) break;
    lowest = j;
  }
  for (int j = lowest; j <= top - 1; ++j) out.push_back(j);
  return out;
}

// ---------------------------------------------------------------------------
// Regression weights
// ---------------------------------------------------------------------------

WeightVector gls_weights(int j_start, int ell, const Matrix& cov) {
  if (j_start < 1 || ell < 1)
    throw std::invalid_argument("gls_weights: need j_start >= 1 and ell >= 1");
  const Index m = ell + 1;
  if (cov.rows() != m || cov.cols() != m)
    throw std::invalid_argument("gls_weights: covariance must be (ell+1)^2");

  Matrix design(m, 2);
  for (Index i = 0; i < m; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = static_cast<double>(i);
  }
  const auto ldlt = cov.ldlt();
  const Matrix a = ldlt.solve(design);           // cov^-1 X
  const Eigen::Matrix2d normal = design.transpose() * a;
  const Eigen::Vector2d slope_row = normal.inverse().col(1);
  WeightVector wv{j_start, a * slope_row};

  // The two normalization identities hold exactly for any nonsingular
  // covariance; failure means the solve degenerated.
  double s0 = 0.0, s1 = 0.0;
  for (Index i = 0; i < m; ++i) {
    s0 += wv.w[i];
    s1 += static_cast<double>(i) * wv.w[i];
  }
  if (!std::isfinite(s0) || std::abs(s0) > 1e-9 || std::abs(s1 - 1.0) > 1e-9)
    throw std::invalid_argument("gls_weights: singular covariance");
  return wv;
}

WeightVector wls_weights(int j_start, int ell) {
  if (j_start < 1 || ell < 1)
    throw std::invalid_argument("wls_weights: need j_start >= 1 and ell >= 1");
  // Var(Y_{j+i}) ~ 2^{j+i}, so regression weights v_i = 2^{-i} up to a
  // constant factor that cancels in the slope functional.
  const int m = ell + 1;
  Vector v(m);
  for (int i = 0; i < m; ++i) v[i] = std::ldexp(1.0, -i);
  const double vsum = v.sum();
  double xbar = 0.0;
  for (int i = 0; i < m; ++i) xbar += v[i] * i;
  xbar /= vsum;
  double denom = 0.0;
  for (int i = 0; i < m; ++i) denom += v[i] * (i - xbar) * (i - xbar);
  WeightVector wv{j_start, Vector(m)};
  for (int i = 0; i < m; ++i) wv.w[i] = v[i] * (i - xbar) / denom;
  return wv;
}

// ---------------------------------------------------------------------------
// Spectrum covariance under the iid 1-Frechet reference model
// ---------------------------------------------------------------------------

namespace {

// Root seed for the covariance simulations; fixed so cached matrices are a
// pure function of (n, replicates).
constexpr std::uint64_t kCovSeed = 0x6A09E667F3BCC909ULL;

Matrix compute_spectrum_covariance(Index n, int replicates) {
  const int J = floor_log2(n);
  Matrix samples(replicates, J);
  Series z(n);
  const std::uint64_t base = fold_in(kCovSeed, static_cast<std::uint64_t>(n));
  for (int r = 0; r < replicates; ++r) {
    SplitMix64 rng(fold_in(base, static_cast<std::uint64_t>(r)));
    for (Index t = 0; t < n; ++t) z[t] = frechet_quantile(rng.uniform(), 1.0);
    const MaxSpectrum spec = max_spectrum(z);
    for (int j = 1; j <= J; ++j) samples(r, j - 1) = spec.y(j);
  }
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Matrix centered = samples.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(replicates - 1);
}

}  // namespace

Matrix spectrum_covariance(Index n, int replicates) {
  if (n < 2 || replicates < 2)
    throw std::invalid_argument("spectrum_covariance: need n >= 2, replicates >= 2");
  static std::mutex mutex;
  static std::map<std::pair<Index, int>, Matrix> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(n, replicates);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, compute_spectrum_covariance(n, replicates)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Tail index and standardized spectrum
// ---------------------------------------------------------------------------

double alpha_hat(const MaxSpectrum& spec, const WeightVector& weights) {
  const int ell = static_cast<int>(weights.w.size()) - 1;
  if (ell < 1) throw std::invalid_argument("alpha_hat: need ell >= 1");
  if (weights.j_start < 1 || weights.j_start + ell > spec.num_scales())
    throw std::invalid_argument("alpha_hat: weight range outside spectrum");
  double slope = 0.0;
  for (int i = 0; i <= ell; ++i) {
    const int j = weights.j_start + i;
    if (!spec.valid(j))
      throw EstimationError("alpha_hat: scale " + std::to_string(j) +
                            " has a non-positive block maximum");
    slope += weights.w[i] * spec.y(j);
  }
  if (!(slope > 0.0))
    throw EstimationError("alpha_hat: non-positive spectrum slope " +
                          num_str(slope));
  return 1.0 / slope;
}

double c_statistic(const MaxSpectrum& spec, int j, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("c_statistic: need alpha > 0");
  if (!spec.valid(j))
    throw EstimationError("c_statistic: scale " + std::to_string(j) +
                          " is invalid");
  return spec.y(j) - static_cast<double>(j) / alpha;
}

std::string spectrum_csv(const MaxSpectrum& spec) {
  std::ostringstream out;
  out << "j,n_j,Y_j,valid\n";
  for (int j = 1; j <= spec.num_scales(); ++j) {
    out << j << ',' << spec.blocks(j) << ',';
    if (spec.valid(j)) out << num_str(spec.y(j));
    out << ',' << (spec.valid(j) ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace exi
