#include "vorbo/rng.hpp"

#include <vector>

namespace vorbo {

namespace {

std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * keys.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
    : material_(mix(seed, keys)), engine_(material_) {}

Rng Rng::substream(std::initializer_list<std::uint64_t> keys) const {
  return Rng(material_, keys);
}

}  // namespace vorbo
