#pragma once

#include <cstddef>
#include <cstdint>

#include "vorbo/rng.hpp"
#include "vorbo/types.hpp"

namespace vorbo {

/// Random Latin hypercube sample of n points in [0,1)^dim: an independent
/// random permutation of strata per column, one uniform draw per stratum.
Matrix lhs(std::size_t n, std::size_t dim, Rng& rng);

/// Largest dimension supported by the bundled direction-number table.
std::size_t sobol_max_dim();

/// Points start_index .. start_index + n - 1 of the unscrambled Sobol sequence
/// (Joe-Kuo direction numbers, Gray-code order). Index 0 is the origin, which
/// the default start skips. Throws ConfigError if dim exceeds the table.
Matrix sobol(std::size_t n, std::size_t dim, std::uint64_t start_index = 1);

/// Uniform direction on the unit sphere in R^dim (normalized standard normal).
Vector sphere_direction(std::size_t dim, Rng& rng);

}  // namespace vorbo
