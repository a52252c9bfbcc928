#pragma once

// Candidate generation on the Voronoi boundary of a design.
//
// A boundary point is parameterized by an origin design point x_n and a
// direction u: walking from x_n along u, the first step t at which x_n + t*u
// leaves the Voronoi cell of x_n (or the unit cube) is found by bisection,
// using nothing but nearest-neighbor queries. All walks in a batch advance in
// lockstep so each bisection round is a single batched query.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "vorbo/metrics.hpp"
#include "vorbo/nn_index.hpp"
#include "vorbo/rng.hpp"
#include "vorbo/types.hpp"

namespace vorbo {

inline constexpr int kDefaultBisectionIters = 30;

/// Scale applied to unit directions: strictly above sqrt(P), so that a step
/// of 1 always leaves the unit cube.
double direction_scale(std::size_t dim);

enum class Strategy { Unif, Rect, Proj };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

struct WalkBatch {
  IndexVector origins;   // one design row per walk
  Matrix directions;     // one row per walk, ||u||_2 > sqrt(P)
  int bisection_iters = kDefaultBisectionIters;
};

struct CandidateSet {
  Matrix points;                             // C x P, inside [0,1]^P
  std::vector<std::uint8_t> boundary_hit;    // walk ended on the cube wall
  IndexVector origin;
  Matrix directions;
  Vector step;         // returned step t (bracket midpoint)
  Vector step_lower;   // last step known inside both cell and cube
  Vector step_upper;   // first step known outside one or the other

  std::size_t size() const { return origin.size(); }
  Vector bracket_width() const { return step_upper - step_lower; }
  double boundary_fraction() const;
};

/// Bisection walk (K rounds, one batched NN query each) from each origin
/// along its direction. Probes outside the cube count as outside the cell.
/// A walk is flagged as a cube-boundary hit when its final upper probe lies
/// outside the cube while the clamped probe still belongs to the origin cell.
CandidateSet vorwalk(const Matrix& design, const NnIndex& index, const WalkBatch& batch);
CandidateSet vorwalk(const Matrix& design, const WalkBatch& batch, Metric metric);

/// Moves every cube-boundary candidate to the midpoint between its origin and
/// the wall point. Flags are preserved.
void halfway_rule(CandidateSet& candidates, const Matrix& design);

struct DirectOptions {
  Strategy strategy = Strategy::Rect;  // Unif or Rect
  /// When set, the first min(2P, C) walks start at this design row and the
  /// rest are drawn uniformly (with replacement) from the other rows.
  /// Otherwise every origin is uniform over all rows.
  std::optional<std::size_t> incumbent;
  int bisection_iters = kDefaultBisectionIters;
  bool halfway = true;
};

CandidateSet direct_sample(const Matrix& design, const NnIndex& index, std::size_t count,
                           const DirectOptions& options, Rng& rng);

struct ProjectOptions {
  int bisection_iters = kDefaultBisectionIters;
  bool halfway = true;
};

/// Walks from the cell containing each precandidate through it to the cell
/// boundary. A precandidate coinciding with its design point gets a random
/// direction from `rng`.
CandidateSet project_sample(const Matrix& design, const NnIndex& index, const Matrix& precandidates,
                            const ProjectOptions& options, Rng& rng);

/// Production scheme: even iterations use rect directions from the incumbent
/// cell, odd iterations project a fresh LHS; LInf metric, halfway rule on.
CandidateSet scheme_final(const Matrix& design, std::size_t count, std::size_t iteration,
                          std::size_t incumbent, Rng& rng, int bisection_iters = kDefaultBisectionIters);

/// Fraction of raw walks (no halfway rule, no incumbent bias) that end on
/// the cube boundary. `proj` uses an LHS of `count` precandidates.
double boundary_proportion(const Matrix& design, std::size_t count, Strategy strategy, Metric metric,
                           Rng& rng, int bisection_iters = kDefaultBisectionIters);

}  // namespace vorbo
