#pragma once

#include <cstdint>
#include <span>

namespace exi {

/// Finalizer of the SplitMix64 generator (public domain, Vigna). Bijective
/// 64-bit mix; also used on its own for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Substream derivation: every replicate / resample draws from its own
/// deterministic stream so results do not depend on execution order or
/// thread count. The rule, applied once per index in the derivation path:
///
///   fold_in(seed, key) = mix64(mix64(seed) + (key + 1) * 0x9E3779B97F4A7C15)
///
/// e.g. the inner resample t of outer iteration o of a run seeded s uses
/// SplitMix64(fold_in(fold_in(s, o), t)).
constexpr std::uint64_t fold_in(std::uint64_t seed, std::uint64_t key) noexcept {
  return mix64(mix64(seed) + (key + 1) * 0x9E3779B97F4A7C15ULL);
}

/// SplitMix64: 64-bit counter-based generator (state advances by a fixed
/// odd constant; output is a strong mix of the state). Period 2^64.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    return mix64(state_ += 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform draw strictly inside (0, 1); safe under log/inverse transforms.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, bound). Lemire's multiply-shift with
  /// rejection. bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() noexcept;

  /// Gamma(shape, 1) via Marsaglia-Tsang, valid for any shape > 0
  /// (shape < 1 handled by the boost U^{1/shape} trick).
  double gamma(double shape) noexcept;

 private:
  std::uint64_t state_;
};

/// Fisher-Yates: uniformly shuffles the first k slots of data (a uniform
/// k-prefix of a random permutation; k == size gives a full shuffle).
void shuffle_prefix(std::span<double> data, std::size_t k, SplitMix64& rng) noexcept;

}  // namespace exi
