#include "exi/resample.hpp"

#include "exi/core.hpp"
#include "exi/parallel.hpp"
#include "exi/rng.hpp"
#include "exi/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace exi {

void ResampleConfig::validate(Index n) const {
  const Index size = (k == 0) ? n : k;
  if (size < 2) throw std::invalid_argument("resample: need k >= 2");
  if (scheme == ResampleScheme::permutation && size > n)
    throw std::invalid_argument("resample: permutation needs k <= n");
  if (n_in < 1 || n_out < 1)
    throw std::invalid_argument("resample: need n_in >= 1 and n_out >= 1");
}

Series resample_series(const Series& x, ResampleScheme scheme, Index k,
                       SplitMix64& rng) {
  const Index n = x.size();
  if (k == 0) k = n;
  if (scheme == ResampleScheme::bootstrap) {
    Series out(k);
    for (Index i = 0; i < k; ++i)
      out[i] = x[static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))];
    return out;
  }
  if (k > n) throw std::invalid_argument("resample: permutation needs k <= n");
  Series out = x;
  shuffle_prefix({out.data(), static_cast<std::size_t>(n)},
                 static_cast<std::size_t>(k), rng);
  return out.head(k);
}

double delta_statistic(std::span<const double> diffs, bool use_median) {
  std::vector<double> pos;
  pos.reserve(diffs.size());
  for (const double d : diffs)
    if (d > 0.0) pos.push_back(d);
  if (pos.empty()) return 0.0;
  return use_median ? median(pos) : mean(pos);
}

int ThetaSamples::scale_index(int j) const noexcept {
  for (std::size_t i = 0; i < scales.size(); ++i)
    if (scales[i] == j) return static_cast<int>(i);
  return -1;
}

std::vector<double> ThetaSamples::column(int j) const {
  const int s = scale_index(j);
  if (s < 0)
    throw EstimationError("theta samples: scale " + std::to_string(j) +
                          " not available");
  std::vector<double> out(static_cast<std::size_t>(theta.rows()));
  for (Index o = 0; o < theta.rows(); ++o)
    out[static_cast<std::size_t>(o)] = theta(o, s);
  return out;
}

std::vector<double> ThetaSamples::pooled(int j_lo, int j_hi) const {
  if (j_lo > j_hi)
    throw std::invalid_argument("theta samples: empty scale range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(theta.rows()) *
              static_cast<std::size_t>(j_hi - j_lo + 1));
  for (int j = j_lo; j <= j_hi; ++j) {
    const auto col = column(j);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

namespace {

struct Plan {
  std::vector<int> scales;
  Vector y0;
  std::vector<Vector> alphas;  // one per slope method, aligned with scales
};

Plan make_plan(const Series& x, const ResampleConfig& cfg,
               std::span<const SlopeMethod> methods) {
  const MaxSpectrum spec = max_spectrum(x);
  int n_valid = 0;
  for (int j = 1; j <= spec.num_scales(); ++j) n_valid += spec.valid(j);
  if (n_valid < 3)
    throw EstimationError("resampling estimator: need at least 3 valid scales, have " +
                          std::to_string(n_valid));

  const Index k = (cfg.k == 0) ? x.size() : cfg.k;
  const int k_scales =
      63 - std::countl_zero(static_cast<std::uint64_t>(k));
  std::vector<int> scales;
  for (const int j : usable_scales(spec))
    if (j <= k_scales) scales.push_back(j);
  if (scales.empty())
    throw EstimationError("resampling estimator: no usable scales "
                          "(tail-index regression impossible)");

  Plan plan;
  plan.scales = scales;
  plan.y0.resize(static_cast<Index>(scales.size()));
  for (std::size_t s = 0; s < scales.size(); ++s)
    plan.y0[static_cast<Index>(s)] = spec.y(scales[s]);

  const int top = spec.num_scales() - 1;  // largest scale is never regressed on
  Matrix cov;
  for (const SlopeMethod method : methods) {
    if (method == SlopeMethod::gls && cov.size() == 0)
      cov = spectrum_covariance(x.size());
    Vector alpha(static_cast<Index>(scales.size()));
    for (std::size_t s = 0; s < scales.size(); ++s) {
      const int j = scales[s];
      const int ell = top - j;
      const WeightVector w =
          (method == SlopeMethod::wls)
              ? wls_weights(j, ell)
              : gls_weights(j, ell, cov.block(j - 1, j - 1, ell + 1, ell + 1));
      alpha[static_cast<Index>(s)] = alpha_hat(spec, w);
    }
    plan.alphas.push_back(std::move(alpha));
  }
  return plan;
}

}  // namespace

std::vector<ThetaSamples> algorithm1_multi(const Series& x,
                                           const ResampleConfig& cfg,
                                           std::span<const SlopeMethod> methods) {
  cfg.validate(x.size());
  if (methods.empty())
    throw std::invalid_argument("resampling estimator: no slope method given");
  const Plan plan = make_plan(x, cfg, methods);
  const Index k = (cfg.k == 0) ? x.size() : cfg.k;
  const auto n_scales = static_cast<Index>(plan.scales.size());

  // One Delta matrix drives every slope method.
  Matrix delta(cfg.n_out, n_scales);
  parallel_for(
      static_cast<std::size_t>(cfg.n_out), cfg.threads,
      [&](std::size_t o) {
        const std::uint64_t outer_seed =
            fold_in(cfg.seed, static_cast<std::uint64_t>(o));
        std::vector<std::vector<double>> diffs(
            static_cast<std::size_t>(n_scales));
        for (auto& d : diffs) d.reserve(static_cast<std::size_t>(cfg.n_in));
        for (int t = 0; t < cfg.n_in; ++t) {
          SplitMix64 rng(fold_in(outer_seed, static_cast<std::uint64_t>(t)));
          const Series r = resample_series(x, cfg.scheme, k, rng);
          const MaxSpectrum rspec = max_spectrum(r);
          for (Index s = 0; s < n_scales; ++s) {
            const int j = plan.scales[static_cast<std::size_t>(s)];
            // A resampled scale can lose validity (an all-nonpositive block
            // after reshuffling); it then simply contributes no difference.
            if (!rspec.valid(j)) continue;
            diffs[static_cast<std::size_t>(s)].push_back(rspec.y(j) -
                                                         plan.y0[s]);
          }
        }
        for (Index s = 0; s < n_scales; ++s)
          delta(static_cast<Index>(o), s) = delta_statistic(
              diffs[static_cast<std::size_t>(s)], cfg.median_delta);
      });

  std::vector<ThetaSamples> out;
  out.reserve(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    ThetaSamples samples;
    samples.scales = plan.scales;
    samples.alpha = plan.alphas[m];
    samples.y = plan.y0;
    samples.theta.resize(cfg.n_out, n_scales);
    for (Index o = 0; o < cfg.n_out; ++o)
      for (Index s = 0; s < n_scales; ++s)
        samples.theta(o, s) =
            std::min(std::exp2(-plan.alphas[m][s] * delta(o, s)), 1.0);
    out.push_back(std::move(samples));
  }
  return out;
}

ThetaSamples algorithm1(const Series& x, const ResampleConfig& cfg,
                        SlopeMethod method) {
  const SlopeMethod methods[] = {method};
  return std::move(algorithm1_multi(x, cfg, methods).front());
}

double point_estimate(const ThetaSamples& samples, int j_lo, int j_hi) {
  return median(samples.pooled(j_lo, j_hi));
}

std::string theta_csv(const ThetaSamples& samples) {
  std::ostringstream out;
  out << "scale,iteration,theta\n";
  for (std::size_t s = 0; s < samples.scales.size(); ++s)
    for (Index o = 0; o < samples.theta.rows(); ++o)
      out << samples.scales[s] << ',' << (o + 1) << ','
          << num_str(samples.theta(o, static_cast<Index>(s))) << '\n';
  return out.str();
}

std::string boxplot_csv(const ThetaSamples& samples) {
  std::ostringstream out;
  out << "scale,q05,q25,median,q75,q95\n";
  for (const int j : samples.scales) {
    auto col = samples.column(j);
    std::sort(col.begin(), col.end());
    out << j;
    for (const double p : {0.05, 0.25, 0.5, 0.75, 0.95})
      out << ',' << num_str(quantile_sorted(col, p));
    out << '\n';
  }
  return out.str();
}

}  // namespace exi
