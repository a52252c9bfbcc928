#include "vorbo/vorcands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vorbo/errors.hpp"
#include "vorbo/sampling.hpp"

namespace vorbo {

namespace {

bool clamp_to_cube(std::span<double> p) {
  bool outside = false;
  for (double& v : p) {
    if (v < 0.0) {
      v = 0.0;
      outside = true;
    } else if (v > 1.0) {
      v = 1.0;
      outside = true;
    }
  }
  return outside;
}

void place(Matrix& out, Eigen::Index r, const Matrix& design, std::size_t origin, const Matrix& dirs,
           double t) {
  out.row(r) = design.row(static_cast<Eigen::Index>(origin)) + t * dirs.row(r);
  clamp_to_cube(row(out, r));
}

}  // namespace

double direction_scale(std::size_t dim) { return std::sqrt(static_cast<double>(dim)) * (1.0 + 1e-9); }

Strategy parse_strategy(std::string_view name) {
  if (name == "unif") return Strategy::Unif;
  if (name == "rect") return Strategy::Rect;
  if (name == "proj") return Strategy::Proj;
  throw ConfigError("unknown strategy '" + std::string(name) + "' (expected unif, rect or proj)");
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Unif: return "unif";
    case Strategy::Rect: return "rect";
    case Strategy::Proj: return "proj";
  }
  return "?";
}

double CandidateSet::boundary_fraction() const {
  if (boundary_hit.empty()) return 0.0;
  const auto hits = std::count(boundary_hit.begin(), boundary_hit.end(), std::uint8_t{1});
  return static_cast<double>(hits) / static_cast<double>(boundary_hit.size());
}

CandidateSet vorwalk(const Matrix& design, const NnIndex& index, const WalkBatch& batch) {
  const auto N = static_cast<std::size_t>(design.rows());
  const auto P = design.cols();
  const std::size_t C = batch.origins.size();
  require(index.size() == N && static_cast<Eigen::Index>(index.dim()) == P,
          "vorwalk: index was not built over this design");
  require(batch.bisection_iters >= 1, "vorwalk: bisection iterations must be >= 1");
  require(static_cast<std::size_t>(batch.directions.rows()) == C && batch.directions.cols() == P,
          "vorwalk: direction matrix shape does not match origins/design");
  const double min_norm = std::sqrt(static_cast<double>(P));
  for (std::size_t c = 0; c < C; ++c) {
    const auto r = static_cast<Eigen::Index>(c);
    require(batch.origins[c] < N, "vorwalk: origin index out of range");
    require(batch.directions.row(r).allFinite(), "vorwalk: non-finite direction");
    require(batch.directions.row(r).norm() > min_norm, "vorwalk: direction norm must exceed sqrt(P)");
  }

  CandidateSet out;
  out.origin = batch.origins;
  out.directions = batch.directions;
  out.step_lower = Vector::Zero(static_cast<Eigen::Index>(C));
  out.step_upper = Vector::Ones(static_cast<Eigen::Index>(C));
  // Reason the current upper bound was set; t = 1 is outside the cube.
  std::vector<std::uint8_t> wall(C, 1);

  Matrix probes(static_cast<Eigen::Index>(C), P);
  std::vector<std::uint8_t> outside(C, 0);
  for (int k = 0; k < batch.bisection_iters; ++k) {
    for (std::size_t c = 0; c < C; ++c) {
      const auto r = static_cast<Eigen::Index>(c);
      const double mid = 0.5 * (out.step_lower[r] + out.step_upper[r]);
      probes.row(r) = design.row(static_cast<Eigen::Index>(batch.origins[c])) + mid * batch.directions.row(r);
      outside[c] = clamp_to_cube(row(probes, r));
    }
    const IndexVector owner = index.nearest_batch(probes, batch.origins);
    for (std::size_t c = 0; c < C; ++c) {
      const auto r = static_cast<Eigen::Index>(c);
      const double mid = 0.5 * (out.step_lower[r] + out.step_upper[r]);
      const bool in_cell = owner[c] == batch.origins[c];
      if (!outside[c] && in_cell) {
        out.step_lower[r] = mid;
      } else {
        out.step_upper[r] = mid;
        wall[c] = outside[c] && in_cell;
      }
    }
  }

  out.step = 0.5 * (out.step_lower + out.step_upper);
  out.points.resize(static_cast<Eigen::Index>(C), P);
  for (std::size_t c = 0; c < C; ++c) {
    const auto r = static_cast<Eigen::Index>(c);
    place(out.points, r, design, batch.origins[c], batch.directions, out.step[r]);
  }
  out.boundary_hit = std::move(wall);
  return out;
}

CandidateSet vorwalk(const Matrix& design, const WalkBatch& batch, Metric metric) {
  const NnIndex index(design, metric);
  return vorwalk(design, index, batch);
}

void halfway_rule(CandidateSet& candidates, const Matrix& design) {
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!candidates.boundary_hit[c]) continue;
    const auto r = static_cast<Eigen::Index>(c);
    place(candidates.points, r, design, candidates.origin[c], candidates.directions, 0.5 * candidates.step[r]);
  }
}

CandidateSet direct_sample(const Matrix& design, const NnIndex& index, std::size_t count,
                           const DirectOptions& options, Rng& rng) {
  require(count >= 1, "direct_sample: candidate count must be positive");
  require(options.strategy != Strategy::Proj, "direct_sample: proj is not a direct strategy");
  const auto N = static_cast<std::size_t>(design.rows());
  const auto P = static_cast<std::size_t>(design.cols());
  if (options.incumbent) require(*options.incumbent < N, "direct_sample: incumbent out of range");

  WalkBatch batch;
  batch.bisection_iters = options.bisection_iters;
  batch.origins.resize(count);
  batch.directions.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(P));

  const std::size_t biased = options.incumbent ? std::min(2 * P, count) : 0;
  for (std::size_t c = 0; c < count; ++c) {
    if (c < biased) {
      batch.origins[c] = *options.incumbent;
    } else if (options.incumbent) {
      if (N == 1) {
        batch.origins[c] = 0;
      } else {
        std::size_t j = rng.index(N - 1);
        if (j >= *options.incumbent) ++j;
        batch.origins[c] = j;
      }
    } else {
      batch.origins[c] = rng.index(N);
    }
  }

  const double scale = direction_scale(P);
  for (std::size_t c = 0; c < count; ++c) {
    const auto r = static_cast<Eigen::Index>(c);
    if (options.strategy == Strategy::Unif) {
      batch.directions.row(r) = scale * sphere_direction(P, rng).transpose();
    } else {
      const std::size_t axis = rng.index(2 * P);
      batch.directions.row(r).setZero();
      batch.directions(r, static_cast<Eigen::Index>(axis / 2)) = (axis % 2 == 0) ? scale : -scale;
    }
  }

  CandidateSet out = vorwalk(design, index, batch);
  if (options.halfway) halfway_rule(out, design);
  return out;
}

CandidateSet project_sample(const Matrix& design, const NnIndex& index, const Matrix& precandidates,
                            const ProjectOptions& options, Rng& rng) {
  const auto P = static_cast<std::size_t>(design.cols());
  require(static_cast<std::size_t>(precandidates.cols()) == P, "project_sample: dimension mismatch");
  require(precandidates.rows() >= 1, "project_sample: no precandidates");

  WalkBatch batch;
  batch.bisection_iters = options.bisection_iters;
  batch.origins = index.nearest_batch(precandidates);
  batch.directions.resize(precandidates.rows(), static_cast<Eigen::Index>(P));
  const double scale = direction_scale(P);
  for (Eigen::Index r = 0; r < precandidates.rows(); ++r) {
    Vector u = (precandidates.row(r) - design.row(static_cast<Eigen::Index>(batch.origins[r]))).transpose();
    const double norm = u.norm();
    if (norm <= 1e-12) {
      u = sphere_direction(P, rng);
    } else {
      u /= norm;
    }
    batch.directions.row(r) = scale * u.transpose();
  }

  CandidateSet out = vorwalk(design, index, batch);
  if (options.halfway) halfway_rule(out, design);
  return out;
}

CandidateSet scheme_final(const Matrix& design, std::size_t count, std::size_t iteration,
                          std::size_t incumbent, Rng& rng, int bisection_iters) {
  require(count >= 1, "scheme_final: candidate count must be positive");
  const NnIndex index(design, Metric::LInf);
  if (iteration % 2 == 0) {
    DirectOptions opts;
    opts.strategy = Strategy::Rect;
    opts.incumbent = incumbent;
    opts.bisection_iters = bisection_iters;
    return direct_sample(design, index, count, opts, rng);
  }
  const Matrix pre = lhs(count, static_cast<std::size_t>(design.cols()), rng);
  ProjectOptions opts;
  opts.bisection_iters = bisection_iters;
  return project_sample(design, index, pre, opts, rng);
}

double boundary_proportion(const Matrix& design, std::size_t count, Strategy strategy, Metric metric,
                           Rng& rng, int bisection_iters) {
  const NnIndex index(design, metric);
  if (strategy == Strategy::Proj) {
    const Matrix pre = lhs(count, static_cast<std::size_t>(design.cols()), rng);
    return project_sample(design, index, pre, {bisection_iters, false}, rng).boundary_fraction();
  }
  DirectOptions opts;
  opts.strategy = strategy;
  opts.bisection_iters = bisection_iters;
  opts.halfway = false;
  return direct_sample(design, index, count, opts, rng).boundary_fraction();
}

}  // namespace vorbo
