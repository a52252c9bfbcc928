#pragma once

// Shared oracles for the unit tests. Everything here is deliberately written
// without going through the library's own search structures.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vorbo/metrics.hpp"
#include "vorbo/rng.hpp"
#include "vorbo/types.hpp"

namespace vorbo::testing {

inline Matrix uniform_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
  return m;
}

/// Direct per-coordinate metric, independent of vorbo::distance.
inline double ref_distance(Metric metric, const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const Eigen::RowVectorXd d = (a - b).cwiseAbs();
  switch (metric) {
    case Metric::L1: return d.sum();
    case Metric::L2: return d.norm();
    case Metric::LInf: return d.maxCoeff();
  }
  return 0.0;
}

struct ScanResult {
  std::size_t index;
  double distance;
  double second;  // second-smallest distance over other points
};

/// O(N) linear scan; ties resolve to the smallest index.
inline ScanResult brute_nearest(const Matrix& X, Metric metric, const Eigen::RowVectorXd& q) {
  ScanResult r{0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d = ref_distance(metric, X.row(i), q);
    if (d < r.distance) {
      r.second = r.distance;
      r.distance = d;
      r.index = static_cast<std::size_t>(i);
    } else if (d < r.second) {
      r.second = d;
    }
  }
  return r;
}

/// Smallest distance from q to any design row other than `skip`.
inline double min_distance_excluding(const Matrix& X, Metric metric, const Eigen::RowVectorXd& q, std::size_t skip) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (static_cast<std::size_t>(i) == skip) continue;
    best = std::min(best, ref_distance(metric, X.row(i), q));
  }
  return best;
}

}  // namespace vorbo::testing
