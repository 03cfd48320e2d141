#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace llbcs {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Combines a parent seed with a tag into a well-mixed child seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed ^ (tag * 0xD1B54A32D192ED03ull);
  std::uint64_t a = splitmix64(s);
  s ^= a + 0x9E3779B97F4A7C15ull;
  return splitmix64(s);
}

}  // namespace detail

/// Deterministic random stream with stable substream derivation.
///
/// Children are derived from the parent's *seed*, never from its position,
/// so how much one stream is consumed cannot perturb any other stream.
/// All value mappings (uniform, normal, integer) are implemented explicitly
/// on top of std::mt19937_64 output so sequences are reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RngStream child(std::string_view tag) const {
    return RngStream(detail::derive_seed(seed_, detail::fnv1a64(tag)));
  }
  RngStream child(std::uint64_t tag) const {
    return RngStream(detail::derive_seed(seed_, tag ^ 0xA0761D6478BD642Full));
  }

  /// Uniform draw in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (cosine branch).
  double normal() {
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Unbiased integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % range);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace llbcs
