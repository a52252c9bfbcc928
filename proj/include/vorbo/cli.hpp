#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vorbo/metrics.hpp"
#include "vorbo/vorcands.hpp"

namespace vorbo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCellFailure = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "VORBO_OUTPUT_DIR";

/// Entry point: `vorbo <run|boundary-study|candidates|problems> [flags]`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
/// Same, with arguments excluding the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a flat `key = value` config file into `--key=value` tokens.
/// Blank lines and lines starting with '#' are ignored.
std::vector<std::string> config_tokens(const std::string& path);

struct BoundaryStudyConfig {
  std::vector<std::size_t> sizes{10, 100, 1000};
  std::vector<std::size_t> dims{2, 10, 100};
  std::vector<Strategy> strategies{Strategy::Unif, Strategy::Rect, Strategy::Proj};
  std::vector<Metric> metrics{Metric::L1, Metric::L2, Metric::LInf};
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  int bisection_iters = kDefaultBisectionIters;
  std::size_t jobs = 1;
};

struct BoundaryRow {
  Strategy strategy;
  Metric metric;
  std::size_t n;
  std::size_t dim;
  std::size_t rep;
  double proportion;
};

/// Boundary prevalence over the (N, P, strategy, metric, replicate) grid.
/// Each (N, P, rep) shares one uniform design across strategies and metrics,
/// and each (N, P, rep, strategy) shares its random walks across metrics.
std::vector<BoundaryRow> boundary_study(const BoundaryStudyConfig& config);
void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows);

}  // namespace vorbo::cli
