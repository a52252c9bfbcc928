#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vorbo/bench.hpp"
#include "vorbo/gp.hpp"
#include "vorbo/types.hpp"
#include "vorbo/vorcands.hpp"

namespace vorbo {

/// How the acquisition subproblem is solved each iteration.
///   vor   - Voronoi-boundary candidates (scheme_final)
///   lhs   - fresh random LHS candidates
///   sobol - next block of the Sobol sequence
///   opt   - multistart continuous ascent of EI
enum class Method { Vor, Lhs, Sobol, Opt };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct ExperimentConfig {
  std::string problem;
  std::size_t dim = 0;
  std::vector<Method> methods;
  std::size_t budget = 0;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> candidates;    // default min(5000, 100 P)
  std::optional<std::size_t> initial_size;  // default 3 P
  std::size_t refit_full = 200;             // refit every acquisition before this many
  std::size_t refit_every = 25;             // then every this many
  int bisection_iters = kDefaultBisectionIters;
  bool record_x = false;
  bool timing = true;
  std::size_t jobs = 1;
  GpConfig gp;

  std::size_t candidate_count() const;
  std::size_t initial_count() const;
  /// Throws ConfigError describing the first invalid setting.
  void validate() const;
};

/// Acquisition iterations count from 0.
bool refit_due(std::size_t acquisition, const ExperimentConfig& config);

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  Method method = Method::Vor;
  std::size_t iteration = 0;  // design size after this acquisition
  Vector x;
  double y = 0.0;
  double y_best = 0.0;
  double elapsed_ms = 0.0;  // cumulative
  double cand_ms = 0.0;     // this iteration's acquisition subproblem
  double fit_ms = 0.0;      // this iteration's surrogate (re)fit
  bool fit_failed = false;
};

/// Initial design for a seed: LHS of config.initial_count() points, shared by
/// every method.
Matrix initial_design(const ExperimentConfig& config, std::uint64_t seed);

/// The problem instance for a seed (fixes the Ackley shift per seed).
TestProblem problem_for_seed(const ExperimentConfig& config, std::uint64_t seed);

/// One optimization run; one record per acquisition.
std::vector<TrajectoryRecord> run_bo(const ExperimentConfig& config, Method method, std::uint64_t seed);

struct CellResult {
  Method method = Method::Vor;
  std::uint64_t seed = 0;
  std::vector<TrajectoryRecord> records;
  std::optional<std::string> error;
};

struct SuiteResult {
  std::vector<CellResult> cells;  // method-major, then seed, in config order
  bool ok() const;
};

/// Runs every (method, seed) cell on up to config.jobs threads. Output order
/// is independent of scheduling.
SuiteResult run_suite(const ExperimentConfig& config);

std::string trajectory_header(const ExperimentConfig& config);
void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config, const SuiteResult& result);

}  // namespace vorbo
