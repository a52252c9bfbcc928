#include "vorbo/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "vorbo/errors.hpp"

namespace vorbo {

Metric parse_metric(std::string_view name) {
  if (name == "l1") return Metric::L1;
  if (name == "l2") return Metric::L2;
  if (name == "linf") return Metric::LInf;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected l1, l2 or linf)");
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::L1: return "l1";
    case Metric::L2: return "l2";
    case Metric::LInf: return "linf";
  }
  return "?";
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "distance: dimension mismatch");
  double acc = 0.0;
  switch (metric) {
    case Metric::L1:
      for (std::size_t p = 0; p < a.size(); ++p) acc += std::abs(a[p] - b[p]);
      return acc;
    case Metric::L2:
      for (std::size_t p = 0; p < a.size(); ++p) {
        const double d = a[p] - b[p];
        acc += d * d;
      }
      return std::sqrt(acc);
    case Metric::LInf:
      for (std::size_t p = 0; p < a.size(); ++p) acc = std::max(acc, std::abs(a[p] - b[p]));
      return acc;
  }
  return acc;
}

double cube_diameter(Metric metric, std::size_t dim) {
  require(dim >= 1, "cube_diameter: dimension must be positive");
  switch (metric) {
    case Metric::L1: return static_cast<double>(dim);
    case Metric::L2: return std::sqrt(static_cast<double>(dim));
    case Metric::LInf: return 1.0;
  }
  return 0.0;
}

}  // namespace vorbo
