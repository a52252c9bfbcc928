#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vorbo/metrics.hpp"
#include "vorbo/types.hpp"

namespace vorbo {

/// Exact nearest-neighbor index over a fixed point set (k-d tree with
/// bucketed leaves). Supports L1, L2 and LInf natively.
///
/// Ties between equidistant points resolve to the smallest point index.
/// The index is immutable after construction; concurrent queries are safe.
class NnIndex {
 public:
  struct Hit {
    std::size_t index;
    double distance;
  };

  /// Throws ContractViolation on an empty or non-finite point set.
  NnIndex(const Matrix& points, Metric metric, std::size_t leaf_size = 12);

  NnIndex(const NnIndex& other);
  NnIndex& operator=(const NnIndex& other);
  NnIndex(NnIndex&& other) noexcept;
  NnIndex& operator=(NnIndex&& other) noexcept;

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  Metric metric() const { return metric_; }

  /// Nearest point to `query`. `hint` (any valid index) only seeds the search
  /// bound; the result is the same with or without it.
  Hit nearest(std::span<const double> query, std::optional<std::size_t> hint = {}) const;

  IndexVector nearest_batch(const Matrix& queries) const;
  /// Batched query with one hint per row (e.g. the expected cell).
  IndexVector nearest_batch(const Matrix& queries, std::span<const std::size_t> hints) const;

  /// Number of nearest_batch calls served so far.
  std::size_t batch_calls() const { return batch_calls_.load(std::memory_order_relaxed); }

 private:
  struct Node {
    // Leaves have split_dim == -1 and cover sorted rows [begin, end).
    int split_dim = -1;
    double split = 0.0;
    std::size_t left = 0, right = 0;
    std::size_t begin = 0, end = 0;
  };

  std::size_t build_node(std::size_t begin, std::size_t end);
  void search(std::size_t node, std::span<const double> q, double bound, std::vector<double>& offsets,
              double& best, std::size_t& best_idx) const;
  double reduced_distance(std::span<const double> q, const double* p, double cutoff) const;
  double unreduce(double r) const;
  IndexVector batch_impl(const Matrix& queries, const std::size_t* hints) const;

  Metric metric_;
  std::size_t n_ = 0, dim_ = 0, leaf_size_ = 12;
  std::vector<std::size_t> order_;   // sorted position -> original index
  std::vector<double> sorted_;       // points in tree order, row-major
  std::vector<std::size_t> position_;  // original index -> sorted position
  std::vector<Node> nodes_;
  mutable std::atomic<std::size_t> batch_calls_{0};
};

}  // namespace vorbo
