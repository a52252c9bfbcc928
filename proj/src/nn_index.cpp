#include "vorbo/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vorbo/detail/parallel.hpp"
#include "vorbo/errors.hpp"

namespace vorbo {

NnIndex::NnIndex(const Matrix& points, Metric metric, std::size_t leaf_size)
    : metric_(metric),
      n_(static_cast<std::size_t>(points.rows())),
      dim_(static_cast<std::size_t>(points.cols())),
      leaf_size_(std::max<std::size_t>(1, leaf_size)) {
  require(n_ >= 1, "NnIndex: empty point set");
  require(dim_ >= 1, "NnIndex: zero-dimensional points");
  require(points.allFinite(), "NnIndex: non-finite coordinates");

  // Build over the caller's rows, then copy them into tree order.
  sorted_.assign(points.data(), points.data() + points.size());
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  nodes_.reserve(2 * (n_ / leaf_size_ + 1));
  build_node(0, n_);

  std::vector<double> reordered(n_ * dim_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::copy_n(points.data() + order_[i] * dim_, dim_, reordered.begin() + i * dim_);
  }
  sorted_ = std::move(reordered);
  position_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) position_[order_[i]] = i;
}

NnIndex::NnIndex(const NnIndex& other)
    : metric_(other.metric_),
      n_(other.n_),
      dim_(other.dim_),
      leaf_size_(other.leaf_size_),
      order_(other.order_),
      sorted_(other.sorted_),
      position_(other.position_),
      nodes_(other.nodes_),
      batch_calls_(other.batch_calls()) {}

NnIndex& NnIndex::operator=(const NnIndex& other) {
  if (this != &other) {
    NnIndex copy(other);
    *this = std::move(copy);
  }
  return *this;
}

NnIndex::NnIndex(NnIndex&& other) noexcept
    : metric_(other.metric_),
      n_(other.n_),
      dim_(other.dim_),
      leaf_size_(other.leaf_size_),
      order_(std::move(other.order_)),
      sorted_(std::move(other.sorted_)),
      position_(std::move(other.position_)),
      nodes_(std::move(other.nodes_)),
      batch_calls_(other.batch_calls()) {}

NnIndex& NnIndex::operator=(NnIndex&& other) noexcept {
  metric_ = other.metric_;
  n_ = other.n_;
  dim_ = other.dim_;
  leaf_size_ = other.leaf_size_;
  order_ = std::move(other.order_);
  sorted_ = std::move(other.sorted_);
  position_ = std::move(other.position_);
  nodes_ = std::move(other.nodes_);
  batch_calls_.store(other.batch_calls(), std::memory_order_relaxed);
  return *this;
}

// During construction sorted_ still holds the caller's row order, indexed
// through order_.
std::size_t NnIndex::build_node(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{});
  nodes_[id].begin = begin;
  nodes_[id].end = end;
  if (end - begin <= leaf_size_) return id;

  int best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t p = 0; p < dim_; ++p) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = sorted_[order_[i] * dim_ + p];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<int>(p);
    }
  }
  // All points coincide: nothing to split on.
  if (best_spread <= 0.0) return id;

  const std::size_t mid = begin + (end - begin) / 2;
  const auto coord = [&](std::size_t idx) { return sorted_[idx * dim_ + best_dim]; };
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::size_t a, std::size_t b) { return coord(a) < coord(b); });
  const double split = coord(order_[mid]);

  const std::size_t left = build_node(begin, mid);
  const std::size_t right = build_node(mid, end);
  nodes_[id].split_dim = best_dim;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

// Distance in the metric's reduced form (L2 squared). Gives up once the
// partial sum strictly exceeds `cutoff`; the returned value then only
// certifies "worse than cutoff".
double NnIndex::reduced_distance(std::span<const double> q, const double* p, double cutoff) const {
  const std::size_t P = dim_;
  double acc = 0.0;
  std::size_t k = 0;
  switch (metric_) {
    case Metric::L1:
      while (k < P) {
        const std::size_t stop = std::min(P, k + 8);
        for (; k < stop; ++k) acc += std::abs(q[k] - p[k]);
        if (acc > cutoff) return acc;
      }
      return acc;
    case Metric::L2:
      while (k < P) {
        const std::size_t stop = std::min(P, k + 8);
        for (; k < stop; ++k) {
          const double d = q[k] - p[k];
          acc += d * d;
        }
        if (acc > cutoff) return acc;
      }
      return acc;
    case Metric::LInf:
      while (k < P) {
        const std::size_t stop = std::min(P, k + 8);
        for (; k < stop; ++k) acc = std::max(acc, std::abs(q[k] - p[k]));
        if (acc > cutoff) return acc;
      }
      return acc;
  }
  return acc;
}

double NnIndex::unreduce(double r) const {
  return metric_ == Metric::L2 ? std::sqrt(r) : r;
}

void NnIndex::search(std::size_t node_id, std::span<const double> q, double bound,
                     std::vector<double>& offsets, double& best, std::size_t& best_idx) const {
  const Node& node = nodes_[node_id];
  if (node.split_dim < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const double d = reduced_distance(q, sorted_.data() + i * dim_, best);
      if (d < best || (d == best && order_[i] < best_idx)) {
        best = d;
        best_idx = order_[i];
      }
    }
    return;
  }

  const auto dim = static_cast<std::size_t>(node.split_dim);
  const double diff = q[dim] - node.split;
  const std::size_t near = diff < 0.0 ? node.left : node.right;
  const std::size_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, bound, offsets, best, best_idx);

  const double old = offsets[dim];
  const double gap = std::abs(diff);
  double far_bound = bound;
  switch (metric_) {
    case Metric::L1: far_bound = bound - old + gap; break;
    case Metric::L2: far_bound = bound - old * old + gap * gap; break;
    case Metric::LInf: far_bound = std::max(bound, gap); break;
  }
  // Equality still descends so that smaller-index ties are found.
  if (far_bound <= best) {
    offsets[dim] = gap;
    search(far, q, far_bound, offsets, best, best_idx);
    offsets[dim] = old;
  }
}

NnIndex::Hit NnIndex::nearest(std::span<const double> query, std::optional<std::size_t> hint) const {
  require(query.size() == dim_, "NnIndex::nearest: dimension mismatch");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = n_;
  if (hint) {
    require(*hint < n_, "NnIndex::nearest: hint out of range");
    best_idx = *hint;
    best = reduced_distance(query, sorted_.data() + position_[*hint] * dim_,
                            std::numeric_limits<double>::infinity());
  }
  std::vector<double> offsets(dim_, 0.0);
  search(0, query, 0.0, offsets, best, best_idx);
  return {best_idx, unreduce(best)};
}

IndexVector NnIndex::batch_impl(const Matrix& queries, const std::size_t* hints) const {
  require(static_cast<std::size_t>(queries.cols()) == dim_, "NnIndex::nearest_batch: dimension mismatch");
  batch_calls_.fetch_add(1, std::memory_order_relaxed);
  const auto m = static_cast<std::size_t>(queries.rows());
  IndexVector out(m);
  const std::size_t grain = std::max<std::size_t>(16, 200000 / std::max<std::size_t>(1, n_ * dim_));
  detail::parallel_for(
      m,
      [&](std::size_t i) {
        const auto q = row(queries, static_cast<Eigen::Index>(i));
        out[i] = hints ? nearest(q, hints[i]).index : nearest(q).index;
      },
      grain);
  return out;
}

IndexVector NnIndex::nearest_batch(const Matrix& queries) const { return batch_impl(queries, nullptr); }

IndexVector NnIndex::nearest_batch(const Matrix& queries, std::span<const std::size_t> hints) const {
  require(hints.size() == static_cast<std::size_t>(queries.rows()),
          "NnIndex::nearest_batch: one hint per query required");
  return batch_impl(queries, hints.data());
}

}  // namespace vorbo
