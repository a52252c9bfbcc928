#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace vorbo {

/// FNV-1a, used to turn stream labels into substream keys. Stable across
/// platforms, unlike std::hash.
constexpr std::uint64_t stream_key(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seeded random source. Every consumer that must be reproducible under
/// parallel scheduling derives its own substream from a (seed, keys...) tuple
/// instead of sharing one engine.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : Rng(seed, {}) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  /// Independent stream keyed by this stream's seed material plus `keys`.
  Rng substream(std::initializer_list<std::uint64_t> keys) const;

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  Engine& engine() { return engine_; }

 private:
  std::uint64_t material_;
  Engine engine_;
};

}  // namespace vorbo
