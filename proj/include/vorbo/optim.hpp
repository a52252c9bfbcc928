#pragma once

#include <functional>

#include "vorbo/types.hpp"

namespace vorbo {

/// Objective returning f(x) and writing df/dx into `grad`. Returning a
/// non-finite value marks x as infeasible; the line search backs off.
using Objective = std::function<double(const Vector& x, Vector& grad)>;

struct BoxOptions {
  int max_iters = 200;
  double grad_tol = 1e-8;   // on the projected gradient, infinity norm
  double rel_f_tol = 1e-13;
  int memory = 8;
};

struct BoxResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Projected limited-memory BFGS minimization on [lower, upper]. Never
/// returns a point worse than the (projected) start.
BoxResult minimize_box(const Objective& objective, Vector x0, const Vector& lower, const Vector& upper,
                       const BoxOptions& options = {});

}  // namespace vorbo
