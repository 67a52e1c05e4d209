#include "exi/scaleselect.hpp"

#include "exi/rng.hpp"
#include "exi/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

namespace {

// ThetaSamples fixture with chosen per-scale locations plus iid noise.
exi::ThetaSamples synthetic_samples(const std::vector<int>& scales,
                                    const std::vector<double>& location,
                                    int n_out, double noise,
                                    std::uint64_t seed) {
  exi::ThetaSamples s;
  s.scales = scales;
  s.alpha = exi::Vector::Ones(exi::Index(scales.size()));
  s.y = exi::Vector::Zero(exi::Index(scales.size()));
  s.theta.resize(n_out, exi::Index(scales.size()));
  exi::SplitMix64 rng(seed);
  for (exi::Index c = 0; c < s.theta.cols(); ++c)
    for (exi::Index r = 0; r < s.theta.rows(); ++r)
      s.theta(r, c) = location[std::size_t(c)] + noise * (rng.uniform() - 0.5);
  return s;
}

}  // namespace

TEST_CASE("kruskal-wallis reproduces the classic two-group example") {
  const auto kw = exi::kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  CHECK(kw.h == doctest::Approx(27.0 / 7.0).epsilon(1e-12));
  CHECK(kw.p == doctest::Approx(0.0495346).epsilon(1e-4));
}

TEST_CASE("ties get mid-ranks and the variance correction") {
  // Values (1,3) vs (2,2): the tied 2's share rank 2.5; both group mean
  // ranks equal 2.5, so H = 0 even after the tie correction divides it.
  const auto kw = exi::kruskal_wallis({{1, 3}, {2, 2}});
  CHECK(kw.h == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kw.p == 1.0);

  // All observations identical: the correction is zero; define p = 1.
  const auto flat = exi::kruskal_wallis({{5, 5}, {5, 5}});
  CHECK(flat.h == 0.0);
  CHECK(flat.p == 1.0);
}

TEST_CASE("rank statistics are invariant under monotone transforms") {
  exi::SplitMix64 rng(12);
  std::vector<std::vector<double>> groups(3);
  for (auto& g : groups)
    for (int i = 0; i < 25; ++i) g.push_back(rng.uniform());
  auto mapped = groups;
  for (auto& g : mapped)
    for (auto& v : g) v = std::exp(3.0 * v); // strictly increasing
  const auto raw = exi::kruskal_wallis(groups);
  const auto exp_kw = exi::kruskal_wallis(mapped);
  CHECK(raw.h == doctest::Approx(exp_kw.h).epsilon(1e-12));
  CHECK(raw.p == doctest::Approx(exp_kw.p).epsilon(1e-12));
}

TEST_CASE("exact permutation p-values validate the chi-squared approximation") {
  // Two groups of two: only the perfectly separated splits reach the
  // observed statistic, so the exact p-value is 2/6.
  CHECK(exi::kruskal_wallis_exact_p({{1, 2}, {3, 4}}) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Three-a-side separation: 2 of the 20 assignments are as extreme.
  CHECK(exi::kruskal_wallis_exact_p({{1, 2, 3}, {4, 5, 6}}) ==
        doctest::Approx(0.1).epsilon(1e-12));
  // Identical groups: every assignment is at least as extreme.
  CHECK(exi::kruskal_wallis_exact_p({{2, 2}, {2, 2}}) == 1.0);
}

TEST_CASE("p-value matrix flags the scales with a shifted location") {
  // Scales 3 and 4 share a location; scale 5 is far away.
  const auto samples =
      synthetic_samples({3, 4, 5}, {0.5, 0.5, 0.9}, 60, 0.05, 3);
  const auto m = exi::pvalue_matrix(samples, 3, 5);
  CHECK(m.at(3, 4) > 0.05);
  CHECK(m.at(3, 5) < 1e-6);
  CHECK(m.at(4, 5) < 1e-6);

  const auto sel = exi::select_range(m, 0.05);
  CHECK(sel.j_lo == 3);
  CHECK(sel.j_hi == 4);
  CHECK_FALSE(sel.fallback);
}

TEST_CASE("selection prefers longer ranges, then lower scales") {
  exi::PValueMatrix m;
  m.j_lo = 3;
  m.j_hi = 6;
  m.p = exi::Matrix::Constant(4, 4,
                              std::numeric_limits<double>::quiet_NaN());
  const auto set = [&](int j1, int j2, double v) {
    m.p(j1 - m.j_lo, j2 - m.j_lo) = v;
  };
  // Only the two single-step ranges pass; ties resolve to the lower start.
  set(3, 4, 0.50);
  set(3, 5, 0.01);
  set(3, 6, 0.01);
  set(4, 5, 0.01);
  set(4, 6, 0.01);
  set(5, 6, 0.90);
  auto sel = exi::select_range(m, 0.05);
  CHECK(sel.j_lo == 3);
  CHECK(sel.j_hi == 4);
  CHECK_FALSE(sel.fallback);

  // A longer passing range beats any shorter one with a higher p-value.
  set(4, 6, 0.06);
  sel = exi::select_range(m, 0.05);
  CHECK(sel.j_lo == 4);
  CHECK(sel.j_hi == 6);

  // Nothing passes: fall back to the lower middle scale of the window.
  for (int j1 = 3; j1 < 6; ++j1)
    for (int j2 = j1 + 1; j2 <= 6; ++j2) set(j1, j2, 0.001);
  sel = exi::select_range(m, 0.05);
  CHECK(sel.fallback);
  CHECK(sel.j_lo == 4);  // 3 + (4-1)/2
  CHECK(sel.j_hi == 4);
}

TEST_CASE("heat-map exports upper-triangular grids") {
  const auto samples =
      synthetic_samples({3, 4, 5}, {0.5, 0.5, 0.5}, 30, 0.02, 8);
  const auto m = exi::pvalue_matrix(samples, 3, 5);
  const auto csv = exi::heatmap_csv(m);
  CHECK(csv.rfind("j1\\j2,4,5\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  // Row j1=4 has an empty cell under column j2=4.
  CHECK(csv.find("\n4,,") != std::string::npos);

  const auto mask = exi::heatmap_mask_csv(m, 0.05);
  CHECK(mask.rfind("j1\\j2,4,5\n", 0) == 0);
  // Data cells are only 0/1 (or empty below the diagonal).
  for (const char c : mask.substr(mask.find('\n') + 1))
    CHECK((c == '0' || c == '1' || c == ',' || c == '\n' || c == '3' ||
           c == '4'));
}

TEST_CASE("degenerate selection inputs are rejected") {
  const auto samples = synthetic_samples({3, 4, 5}, {0.5, 0.5, 0.5}, 10, 0.01, 1);
  CHECK_THROWS_AS(exi::pvalue_matrix(samples, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(exi::pvalue_matrix(samples, 2, 5), exi::EstimationError);
  CHECK_THROWS_AS(exi::pvalue_matrix(samples, 4, 6), exi::EstimationError);
}
