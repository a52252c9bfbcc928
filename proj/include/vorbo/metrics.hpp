#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace vorbo {

/// Dissimilarity used to define the Voronoi tessellation of a design.
enum class Metric { L1, L2, LInf };

/// Parses "l1" | "l2" | "linf". Throws ConfigError otherwise.
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

double distance(Metric metric, std::span<const double> a, std::span<const double> b);

/// Diameter of [0,1]^dim under `metric`: dim, sqrt(dim), 1.
double cube_diameter(Metric metric, std::size_t dim);

}  // namespace vorbo
