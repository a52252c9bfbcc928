#include "vorbo/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "vorbo/errors.hpp"

namespace vorbo {

namespace {

Vector project(const Vector& x, const Vector& lower, const Vector& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

// Components pinned at a bound with the gradient pushing outward.
std::vector<bool> active_set(const Vector& x, const Vector& g, const Vector& lower, const Vector& upper) {
  std::vector<bool> active(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    active[static_cast<std::size_t>(i)] = (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0);
  }
  return active;
}

struct Pair {
  Vector s, y;
  double rho;
};

Vector two_loop(const std::deque<Pair>& pairs, const Vector& g, const std::vector<bool>& active) {
  Vector q = g;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (active[static_cast<std::size_t>(i)]) q[i] = 0.0;
  }
  std::vector<double> alpha(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    alpha[k] = pairs[k].rho * pairs[k].s.dot(q);
    q -= alpha[k] * pairs[k].y;
  }
  if (!pairs.empty()) {
    const Pair& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double beta = pairs[k].rho * pairs[k].y.dot(q);
    q += (alpha[k] - beta) * pairs[k].s;
  }
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (active[static_cast<std::size_t>(i)]) q[i] = 0.0;
  }
  return -q;
}

}  // namespace

BoxResult minimize_box(const Objective& objective, Vector x0, const Vector& lower, const Vector& upper,
                       const BoxOptions& options) {
  require(x0.size() == lower.size() && x0.size() == upper.size(), "minimize_box: bound size mismatch");
  require((lower.array() <= upper.array()).all(), "minimize_box: lower bound above upper bound");

  BoxResult result;
  Vector x = project(x0, lower, upper);
  Vector g(x.size());
  double f = objective(x, g);
  result.evaluations = 1;
  result.x = x;
  result.value = f;
  if (!std::isfinite(f) || !g.allFinite()) return result;

  std::deque<Pair> pairs;
  Vector g_new(x.size());
  for (int iter = 0; iter < options.max_iters; ++iter) {
    result.iterations = iter + 1;
    const Vector projected_grad = x - project(x - g, lower, upper);
    if (projected_grad.lpNorm<Eigen::Infinity>() < options.grad_tol) {
      result.converged = true;
      break;
    }

    const auto active = active_set(x, g, lower, upper);
    Vector d = two_loop(pairs, g, active);
    if (d.dot(g) >= 0.0) {
      pairs.clear();
      d = two_loop(pairs, g, active);
    }
    // First step without curvature information: unit-length move.
    double step = pairs.empty() ? std::min(1.0, 1.0 / std::max(d.norm(), 1e-300)) : 1.0;

    bool accepted = false;
    Vector x_new;
    double f_new = f;
    for (int backtrack = 0; backtrack < 40; ++backtrack) {
      x_new = project(x + step * d, lower, upper);
      f_new = objective(x_new, g_new);
      ++result.evaluations;
      const double decrease = g.dot(x_new - x);
      if (std::isfinite(f_new) && g_new.allFinite() && f_new <= f + 1e-4 * decrease && decrease < 0.0) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (pairs.empty()) break;
      pairs.clear();
      continue;
    }

    Vector s = x_new - x;
    Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }

    const double change = f - f_new;
    x = x_new;
    g = g_new;
    f = f_new;
    if (change <= options.rel_f_tol * std::abs(f)) {
      result.converged = true;
      break;
    }
  }

  if (f <= result.value) {
    result.x = x;
    result.value = f;
  }
  return result;
}

}  // namespace vorbo
