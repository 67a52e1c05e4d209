#include "exi/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

TEST_CASE("chi-squared survival function agrees with closed forms") {
  // df=1: SF(x) = erfc(sqrt(x/2)); df=2: SF(x) = exp(-x/2);
  // df=4: SF(x) = exp(-x/2) (1 + x/2).
  for (const double x : {0.1, 0.5, 1.0, 3.0, 8.0, 20.0}) {
    CHECK(exi::chi_squared_sf(x, 1) ==
          doctest::Approx(std::erfc(std::sqrt(x / 2))).epsilon(1e-12));
    CHECK(exi::chi_squared_sf(x, 2) ==
          doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
    CHECK(exi::chi_squared_sf(x, 4) ==
          doctest::Approx(std::exp(-x / 2) * (1 + x / 2)).epsilon(1e-12));
  }
  CHECK(exi::chi_squared_sf(0.0, 3) == 1.0);
  CHECK(exi::chi_squared_sf(-1.0, 3) == 1.0);
  CHECK(exi::chi_squared_sf(5.0, 3) < exi::chi_squared_sf(4.0, 3));
}

TEST_CASE("regularized incomplete gamma halves sum to one") {
  for (const double a : {0.3, 1.0, 2.5, 10.0})
    for (const double x : {0.01, 0.5, 2.0, 15.0})
      CHECK(exi::gamma_p(a, x) + exi::gamma_q(a, x) ==
            doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the cdf to high precision") {
  CHECK(exi::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(exi::normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(exi::normal_quantile(0.95) ==
        doctest::Approx(1.6448536269514722).epsilon(1e-12));
  for (const double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-6}) {
    CHECK(exi::normal_cdf(exi::normal_quantile(p)) ==
          doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(exi::normal_quantile(0.1) == -exi::normal_quantile(0.9));
}

TEST_CASE("quantile interpolates between order statistics") {
  const std::vector<double> x{10, 20, 30, 40};
  CHECK(exi::quantile(x, 0.0) == 10);
  CHECK(exi::quantile(x, 1.0) == 40);
  CHECK(exi::quantile(x, 0.5) == 25);
  CHECK(exi::quantile(x, 0.25) == 17.5);
  CHECK(exi::quantile(x, 1.0 / 3.0) == doctest::Approx(20.0));

  // Unsorted input is sorted internally; quantile_sorted trusts its input.
  const std::vector<double> shuffled{30, 10, 40, 20};
  CHECK(exi::quantile(shuffled, 0.5) == 25);

  std::vector<double> deciles;
  for (int i = 1; i <= 10; ++i) deciles.push_back(0.1 * i);
  CHECK(exi::quantile_sorted(deciles, 0.1) == doctest::Approx(0.19));
  CHECK(exi::quantile_sorted(deciles, 0.9) == doctest::Approx(0.91));
}

TEST_CASE("median handles odd and even sizes") {
  CHECK(exi::median(std::vector<double>{3, 1, 2}) == 2);
  CHECK(exi::median(std::vector<double>{4, 1, 3, 2}) == 2.5);
  CHECK(exi::median(std::vector<double>{7}) == 7);
}

TEST_CASE("variance is the population variance") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(exi::mean(x) == 2.5);
  CHECK(exi::variance(x) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(exi::variance(std::vector<double>{5, 5, 5}) == 0.0);
}
