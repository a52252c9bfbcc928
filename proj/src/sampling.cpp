#include "vorbo/sampling.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "vorbo/errors.hpp"

namespace vorbo {

namespace {

struct SobolRow {
  std::uint32_t poly;
  std::array<std::uint32_t, 18> m;
};

#include "vorbo/detail/sobol_table.inc"

constexpr int kSobolBits = 32;

// Direction numbers v_1..v_32 for one dimension, scaled to 32-bit integers.
std::array<std::uint32_t, kSobolBits> direction_numbers(std::size_t d) {
  std::array<std::uint32_t, kSobolBits> m{};
  const SobolRow& r = kSobolTable[d];
  const int s = std::bit_width(r.poly) - 1;
  if (s == 0) {
    m.fill(1);
  } else {
    for (int i = 0; i < s && i < kSobolBits; ++i) m[i] = r.m[i];
    for (int i = s; i < kSobolBits; ++i) {
      std::uint32_t value = m[i - s] ^ (m[i - s] << s);
      for (int k = 1; k < s; ++k) {
        const std::uint32_t a_k = (r.poly >> (s - k)) & 1u;
        if (a_k) value ^= m[i - k] << k;
      }
      m[i] = value;
    }
  }
  std::array<std::uint32_t, kSobolBits> v{};
  for (int i = 0; i < kSobolBits; ++i) v[i] = m[i] << (kSobolBits - 1 - i);
  return v;
}

}  // namespace

Matrix lhs(std::size_t n, std::size_t dim, Rng& rng) {
  require(n >= 1, "lhs: sample size must be positive");
  require(dim >= 1, "lhs: dimension must be positive");
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::vector<std::size_t> perm(n);
  const double width = 1.0 / static_cast<double>(n);
  for (std::size_t p = 0; p < dim; ++p) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::size_t i = 0; i < n; ++i) {
      double v = (static_cast<double>(perm[i]) + rng.uniform()) * width;
      // Rounding can land exactly on the upper stratum edge.
      v = std::min(v, std::nextafter((static_cast<double>(perm[i]) + 1.0) * width, 0.0));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = v;
    }
  }
  return out;
}

std::size_t sobol_max_dim() { return kSobolTableDims; }

Matrix sobol(std::size_t n, std::size_t dim, std::uint64_t start_index) {
  require(dim >= 1, "sobol: dimension must be positive");
  if (dim > kSobolTableDims) {
    throw ConfigError("sobol: dimension " + std::to_string(dim) + " exceeds supported maximum " +
                      std::to_string(kSobolTableDims));
  }
  require(start_index + n <= (std::uint64_t{1} << kSobolBits), "sobol: index range exhausted");

  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  constexpr double kScale = 1.0 / 4294967296.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const auto v = direction_numbers(d);
    // Gray-code point at start_index: XOR of v_k over set bits of g = i ^ (i >> 1).
    std::uint32_t x = 0;
    const std::uint64_t gray = start_index ^ (start_index >> 1);
    for (int k = 0; k < kSobolBits; ++k) {
      if ((gray >> k) & 1u) x ^= v[k];
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t i = start_index + j;
      if (j > 0) {
        // Moving from i-1 to i flips the bit at the lowest zero of i-1.
        x ^= v[std::countr_one(i - 1)];
      }
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(d)) = static_cast<double>(x) * kScale;
    }
  }
  return out;
}

Vector sphere_direction(std::size_t dim, Rng& rng) {
  require(dim >= 1, "sphere_direction: dimension must be positive");
  Vector v(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  do {
    for (Eigen::Index p = 0; p < v.size(); ++p) v[p] = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace vorbo
