#include "vorbo/bench.hpp"

#include <cmath>
#include <numbers>

#include "vorbo/errors.hpp"

namespace vorbo {

using std::numbers::pi;

double ackley(std::span<const double> x) {
  constexpr double a = 20.0, b = 0.2, c = 2.0 * pi;
  const double d = static_cast<double>(x.size());
  double sq = 0.0, cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(c * v);
  }
  return -a * std::exp(-b * std::sqrt(sq / d)) - std::exp(cs / d) + a + std::numbers::e;
}

double levy(std::span<const double> x) {
  const std::size_t d = x.size();
  auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double total = s0 * s0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    total += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  total += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return total;
}

double rosenbrock(std::span<const double> x) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = x[i] - 1.0;
    total += 100.0 * a * a + b * b;
  }
  return total;
}

double sinesum(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += std::sin(4.0 * pi * (v - 0.5) * (v - 0.5));
  return total;
}

const std::vector<ProblemInfo>& problem_catalog() {
  static const std::vector<ProblemInfo> catalog = {
      {"ackley", -32.768, 32.768, 1, 0, 0.0},
      {"levy", -10.0, 10.0, 1, 0, 0.0},
      {"rosenbrock", -5.0, 10.0, 2, 0, 0.0},
      {"sinesum2d", 0.0, 1.0, 2, 2, 0.0},
  };
  return catalog;
}

TestProblem::TestProblem(std::string name, std::size_t dim, double native_lower, double native_upper,
                         Native native, std::optional<double> known_best, std::optional<Vector> shift)
    : name_(std::move(name)),
      dim_(dim),
      lower_(native_lower),
      upper_(native_upper),
      native_(std::move(native)),
      known_best_(known_best),
      shift_(std::move(shift)) {}

std::vector<double> TestProblem::to_native(std::span<const double> unit) const {
  require(unit.size() == dim_, "TestProblem: input dimension mismatch");
  std::vector<double> x(unit.begin(), unit.end());
  if (shift_) {
    // Native optimum sits at the box center; move it to the shift location.
    for (std::size_t p = 0; p < dim_; ++p) {
      double v = x[p] - (*shift_)[static_cast<Eigen::Index>(p)] + 0.5;
      v -= std::floor(v);
      x[p] = v;
    }
  }
  for (double& v : x) v = lower_ + (upper_ - lower_) * v;
  return x;
}

double TestProblem::evaluate(std::span<const double> unit) const {
  const auto x = to_native(unit);
  return native_(x);
}

TestProblem make_problem(std::string_view name, std::size_t dim, Rng& rng) {
  const ProblemInfo* info = nullptr;
  for (const auto& p : problem_catalog()) {
    if (p.name == name) info = &p;
  }
  if (!info) throw ConfigError("unknown problem '" + std::string(name) + "'");
  if (dim < info->min_dim || (info->max_dim != 0 && dim > info->max_dim)) {
    throw ConfigError("problem '" + std::string(name) + "' does not support dimension " + std::to_string(dim));
  }

  if (name == "ackley") {
    Vector shift(static_cast<Eigen::Index>(dim));
    for (Eigen::Index p = 0; p < shift.size(); ++p) shift[p] = rng.uniform();
    return {"ackley", dim, info->native_lower, info->native_upper, ackley, info->known_best, std::move(shift)};
  }
  if (name == "levy") return {"levy", dim, info->native_lower, info->native_upper, levy, info->known_best};
  if (name == "rosenbrock") {
    return {"rosenbrock", dim, info->native_lower, info->native_upper, rosenbrock, info->known_best};
  }
  return {"sinesum2d", dim, info->native_lower, info->native_upper, sinesum, info->known_best};
}

}  // namespace vorbo
