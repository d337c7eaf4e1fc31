#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace jgb {

/// Tags separating the independent random streams drawn from one user seed.
enum class StreamPurpose : std::uint64_t {
  sample = 0x73616d706c65ULL,
  moment = 0x6d6f6d656e74ULL,
  oracle = 0x6f7261636c65ULL,
};

/// SplitMix64 in counter mode: draw i of a stream is mix64(key + i * gamma).
/// A stream is identified by (seed, purpose, substream); the key is
///   mix64(mix64(seed) ^ purpose ^ mix64(substream + 1)).
/// Random access by counter makes batch-parallel Monte Carlo reproducible
/// regardless of scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  CounterRng(std::uint64_t seed, StreamPurpose purpose, std::uint64_t substream = 0) noexcept
      : key_(mix64(mix64(seed) ^ static_cast<std::uint64_t>(purpose) ^ mix64(substream + 1))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * gamma); }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch only, two uniforms per draw).
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace jgb
