#pragma once

#include <cstdint>
#include <limits>

namespace gibbsrate {

/// SplitMix64: a 64-bit generator with a one-word state, so a fresh substream
/// per trajectory is cheap. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic substream for trajectory `index` under master `seed`.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
  SplitMix64 mix(seed ^ 0x6A09E667F3BCC909ULL);
  const std::uint64_t base = mix();
  SplitMix64 keyed(base + 0xD1B54A32D192ED03ULL * (index + 1));
  return SplitMix64(keyed());
}

}  // namespace gibbsrate
