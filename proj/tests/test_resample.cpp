#include "exi/resample.hpp"

#include "exi/rng.hpp"
#include "exi/simulate.hpp"
#include "exi/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using exi::ResampleConfig;
using exi::ResampleScheme;
using exi::Series;
using exi::SlopeMethod;

namespace {

Series iota_series(exi::Index n) {
  Series x(n);
  for (exi::Index i = 0; i < n; ++i) x[i] = double(i + 1);
  return x;
}

std::vector<double> to_vec(const Series& x) {
  return {x.data(), x.data() + x.size()};
}

ResampleConfig quick_config(int n_out, int n_in, std::uint64_t seed) {
  ResampleConfig cfg;
  cfg.n_out = n_out;
  cfg.n_in = n_in;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("permutation resampling preserves the sample exactly") {
  exi::SplitMix64 rng(3);
  const Series x = iota_series(100);
  const Series p = exi::resample_series(x, ResampleScheme::permutation, 100, rng);
  REQUIRE(p.size() == 100);
  auto sorted = to_vec(p);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == to_vec(x));
  CHECK(to_vec(p) != to_vec(x));
}

TEST_CASE("short permutations draw a subset without replacement") {
  exi::SplitMix64 rng(4);
  const Series x = iota_series(100);
  const Series p = exi::resample_series(x, ResampleScheme::permutation, 40, rng);
  REQUIRE(p.size() == 40);
  std::set<double> seen(p.data(), p.data() + p.size());
  CHECK(seen.size() == 40);
  for (const double v : seen) {
    CHECK(v >= 1.0);
    CHECK(v <= 100.0);
  }
}

TEST_CASE("bootstrap draws with replacement at the right frequencies") {
  exi::SplitMix64 rng(5);
  Series x(2);
  x << 0.0, 1.0;
  int ones = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Series b = exi::resample_series(x, ResampleScheme::bootstrap, 1, rng);
    ones += b[0] == 1.0;
  }
  CHECK(double(ones) / draws == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("delta statistic aggregates only the positive differences") {
  CHECK(exi::delta_statistic(std::vector<double>{-1.0, 2.0, 4.0}, false) == 3.0);
  CHECK(exi::delta_statistic(std::vector<double>{-1.0, 2.0, 4.0}, true) == 3.0);
  CHECK(exi::delta_statistic(std::vector<double>{1.0, 2.0, 4.0}, true) == 2.0);
  CHECK(exi::delta_statistic(std::vector<double>{-1.0, -2.0}, false) == 0.0);
  CHECK(exi::delta_statistic(std::vector<double>{}, false) == 0.0);
  CHECK(exi::delta_statistic(std::vector<double>{0.0}, false) == 0.0);
}

TEST_CASE("config validation rejects impossible settings") {
  const exi::Index n = 64;
  ResampleConfig cfg;
  CHECK_NOTHROW(cfg.validate(n));
  cfg.k = 65;  // permutation cannot exceed the sample
  CHECK_THROWS_AS(cfg.validate(n), std::invalid_argument);
  cfg.scheme = ResampleScheme::bootstrap;
  CHECK_NOTHROW(cfg.validate(n));
  cfg.k = 1;
  CHECK_THROWS_AS(cfg.validate(n), std::invalid_argument);
  cfg = {};
  cfg.n_out = 0;
  CHECK_THROWS_AS(cfg.validate(n), std::invalid_argument);
  cfg = {};
  cfg.n_in = 0;
  CHECK_THROWS_AS(cfg.validate(n), std::invalid_argument);
}

TEST_CASE("resampled estimates stay in the unit interval on armax data") {
  const Series x = exi::gen_process(exi::ProcessSpec::armax(0.5, 1.0), 2048, 11);
  const auto samples = exi::algorithm1(x, quick_config(20, 3, 2), SlopeMethod::wls);

  REQUIRE_FALSE(samples.scales.empty());
  CHECK(samples.scales.front() == 1);
  CHECK(samples.scales.back() == 9);  // floor(log2 2048) - 2
  CHECK(samples.theta.rows() == 20);
  CHECK(samples.theta.cols() == exi::Index(samples.scales.size()));
  CHECK((samples.theta.array() > 0.0).all());
  CHECK((samples.theta.array() <= 1.0).all());
  CHECK((samples.alpha.array() > 0.0).all());

  CHECK(samples.scale_index(1) == 0);
  CHECK(samples.scale_index(99) == -1);
  CHECK(samples.column(3).size() == 20);
  CHECK(samples.pooled(3, 5).size() == 60);
  CHECK(exi::point_estimate(samples, 3, 5) ==
        exi::median(samples.pooled(3, 5)));
}

TEST_CASE("the outer loop is invariant to the thread count") {
  const Series x = exi::gen_process(exi::ProcessSpec::armax(0.3, 1.0), 1024, 8);
  auto cfg = quick_config(16, 2, 77);
  cfg.threads = 1;
  const auto serial = exi::algorithm1(x, cfg, SlopeMethod::wls);
  cfg.threads = 4;
  const auto threaded = exi::algorithm1(x, cfg, SlopeMethod::wls);
  CHECK((serial.theta - threaded.theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((serial.alpha - threaded.alpha).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("multi-method evaluation equals independent runs per method") {
  const Series x = exi::gen_process(exi::ProcessSpec::armax(0.5, 1.0), 1024, 21);
  const auto cfg = quick_config(12, 2, 5);
  const SlopeMethod both[] = {SlopeMethod::wls, SlopeMethod::gls};
  const auto multi = exi::algorithm1_multi(x, cfg, both);
  REQUIRE(multi.size() == 2);
  const auto wls = exi::algorithm1(x, cfg, SlopeMethod::wls);
  const auto gls = exi::algorithm1(x, cfg, SlopeMethod::gls);
  CHECK((multi[0].theta - wls.theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((multi[1].theta - gls.theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((multi[0].alpha - wls.alpha).cwiseAbs().maxCoeff() == 0.0);
  CHECK((multi[1].alpha - gls.alpha).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("median-delta variant is a valid alternative aggregation") {
  const Series x = exi::gen_process(exi::ProcessSpec::armax(0.5, 1.0), 1024, 3);
  auto cfg = quick_config(10, 5, 6);
  cfg.median_delta = true;
  const auto samples = exi::algorithm1(x, cfg, SlopeMethod::wls);
  CHECK((samples.theta.array() > 0.0).all());
  CHECK((samples.theta.array() <= 1.0).all());
}

TEST_CASE("tail-index estimates on iid data sit near the true exponent") {
  // Single fixed-seed realization; the estimator at mid scales should be
  // within sampling error of alpha = 1.
  exi::SplitMix64 rng(99);
  Series z(4096);
  for (exi::Index i = 0; i < z.size(); ++i)
    z[i] = exi::frechet_quantile(rng.uniform(), 1.0);
  const auto samples = exi::algorithm1(z, quick_config(5, 1, 1), SlopeMethod::wls);
  for (const int j : {3, 4, 5}) {
    const double a = samples.alpha[samples.scale_index(j)];
    CHECK(a > 0.8);
    CHECK(a < 1.3);
  }
}

TEST_CASE("csv exports have the documented shape") {
  const Series x = exi::gen_process(exi::ProcessSpec::armax(0.5, 1.0), 256, 2);
  const auto samples = exi::algorithm1(x, quick_config(4, 1, 9), SlopeMethod::wls);
  const auto theta = exi::theta_csv(samples);
  CHECK(theta.rfind("scale,iteration,theta\n", 0) == 0);
  CHECK(std::count(theta.begin(), theta.end(), '\n') ==
        1 + 4 * exi::Index(samples.scales.size()));
  const auto box = exi::boxplot_csv(samples);
  CHECK(box.rfind("scale,q05,q25,median,q75,q95\n", 0) == 0);
  CHECK(std::count(box.begin(), box.end(), '\n') ==
        1 + exi::Index(samples.scales.size()));
}

TEST_CASE("series without enough valid scales are rejected") {
  Series tiny(4);
  tiny << 1, 2, 3, 4;  // only 2 scales exist
  CHECK_THROWS_AS(exi::algorithm1(tiny, quick_config(3, 1, 1), SlopeMethod::wls),
                  exi::EstimationError);
}
