#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vorbo/rng.hpp"
#include "vorbo/types.hpp"

namespace vorbo {

/// A deterministic objective on [0,1]^dim, internally mapped affinely onto
/// the function's native box.
class TestProblem {
 public:
  using Native = std::function<double(std::span<const double>)>;

  TestProblem(std::string name, std::size_t dim, double native_lower, double native_upper, Native native,
              std::optional<double> known_best, std::optional<Vector> shift = std::nullopt);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  double native_lower() const { return lower_; }
  double native_upper() const { return upper_; }
  std::optional<double> known_best() const { return known_best_; }
  /// Torus translation applied before the affine map (Ackley only).
  const std::optional<Vector>& shift() const { return shift_; }

  /// Unit-cube input to native coordinates (after the shift, if any).
  std::vector<double> to_native(std::span<const double> unit) const;
  double evaluate(std::span<const double> unit) const;

 private:
  std::string name_;
  std::size_t dim_;
  double lower_, upper_;
  Native native_;
  std::optional<double> known_best_;
  std::optional<Vector> shift_;
};

struct ProblemInfo {
  std::string_view name;
  double native_lower;
  double native_upper;
  std::size_t min_dim;
  std::size_t max_dim;  // 0 = unbounded
  std::optional<double> known_best;
};

const std::vector<ProblemInfo>& problem_catalog();

/// Builds a named problem: ackley (optimum shifted uniformly at random on the
/// torus), levy, rosenbrock, sinesum2d. Throws ConfigError for unknown names
/// or unsupported dimensions.
TestProblem make_problem(std::string_view name, std::size_t dim, Rng& rng);

// Native-domain formulas.
double ackley(std::span<const double> x);
double levy(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double sinesum(std::span<const double> x);

}  // namespace vorbo
