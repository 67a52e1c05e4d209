#include "exi/rng.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace exi {

double SplitMix64::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SplitMix64::gamma(double shape) noexcept {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

void shuffle_prefix(std::span<double> data, std::size_t k, SplitMix64& rng) noexcept {
  const std::size_t n = data.size();
  if (n == 0) return;
  if (k > n) k = n;
  const std::size_t last = (k == n) ? n - 1 : k;
  for (std::size_t i = 0; i < last; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(data[i], data[j]);
  }
}

}  // namespace exi
