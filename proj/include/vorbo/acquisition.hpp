#pragma once

#include <cstddef>
#include <span>

#include "vorbo/gp.hpp"
#include "vorbo/rng.hpp"
#include "vorbo/types.hpp"
#include "vorbo/vorcands.hpp"

namespace vorbo {

/// Below this predictive sd, EI degenerates to max(y_min - mean, 0).
inline constexpr double kSdFloor = 1e-10;

/// Expected improvement below y_min (minimization) of N(mean, sd^2).
double expected_improvement(double mean, double sd, double y_min);

Vector ei(const GpModel& model, const Matrix& queries, double y_min);

struct EiGradient {
  double value = 0.0;
  Vector gradient;
};

enum class GradientMode { Analytic, FiniteDifference };

/// EI and its input gradient. Analytic mode falls back to central
/// differences where the predictive sd is below kSdFloor.
EiGradient ei_with_gradient(const GpModel& model, std::span<const double> x, double y_min,
                            GradientMode mode = GradientMode::Analytic, double fd_step = 1e-6);

struct AcqResult {
  Vector argmax;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t index = 0;  // row of the winner for discrete searches
};

/// Best candidate row by EI; ties go to the smallest row.
AcqResult argmax_discrete(const GpModel& model, const Matrix& candidates, double y_min);
AcqResult argmax_discrete(const GpModel& model, const CandidateSet& candidates, double y_min);

struct MultistartOptions {
  std::size_t lhs_starts = 0;  // 0 means 2P
  int max_iters = 200;
  double grad_tol = 1e-8;
};

/// Box-constrained quasi-Newton ascent of EI from an LHS of starts plus the
/// incumbent; returns the best terminal point over all starts.
AcqResult multistart_opt(const GpModel& model, double y_min, std::span<const double> incumbent, Rng& rng,
                         const MultistartOptions& options = {});

}  // namespace vorbo
