#pragma once

#include <span>

#include "vorbo/types.hpp"

namespace vorbo {

/// Hyperparameters of the ARD squared-exponential kernel
///   k(a, b) = signal_scale * exp(-sum_p (a_p - b_p)^2 / lengthscales_p).
/// The nugget is fixed jitter on the diagonal, not an estimated noise level.
struct GpHyper {
  Vector lengthscales;
  double signal_scale = 1.0;
  double nugget = 1e-8;

  /// Starting point for a first fit: every lengthscale at the 10% quantile of
  /// pairwise squared distances in `design`.
  static GpHyper initial(const Matrix& design);
};

struct GpConfig {
  double lengthscale_lower = 1e-3;
  double lengthscale_upper = 10.0;
  double nugget = 1e-8;
  double max_nugget = 1e-4;  // jitter escalates x10 up to this value
  int max_iters = 100;
  double grad_tol = 1e-6;
};

double kernel(const GpHyper& hyper, std::span<const double> a, std::span<const double> b);

struct LikelihoodEval {
  double value = 0.0;
  Vector gradient;  // with respect to log lengthscales
  double signal_scale = 0.0;
};

/// Log marginal likelihood of centered outputs with the signal scale profiled
/// out in closed form, and its analytic gradient in log-lengthscale space.
/// Throws SurrogateFitError when the jittered correlation matrix is not
/// numerically positive definite.
LikelihoodEval profile_log_likelihood(const Matrix& design, const Vector& y, const Vector& lengthscales,
                                      double nugget, bool with_gradient = true);

struct Prediction {
  Vector mean;
  Vector sd;
};

/// Moments at one point plus their input gradients.
struct PointPrediction {
  double mean = 0.0;
  double sd = 0.0;
  Vector mean_grad;
  Vector var_grad;
};

/// Constant-mean GP conditioned on a design. Immutable once built.
class GpModel {
 public:
  /// Conditions at fixed lengthscales (signal scale re-profiled). Escalates
  /// the nugget on factorization failure; throws SurrogateFitError past
  /// config.max_nugget.
  static GpModel condition(const Matrix& design, const Vector& y, const Vector& lengthscales,
                           const GpConfig& config = {});

  /// Conditions with the hyperparameters as given; a zero signal scale is
  /// replaced by its profiled estimate. The nugget still escalates on
  /// factorization failure.
  static GpModel condition(const Matrix& design, const Vector& y, const GpHyper& hyper,
                           const GpConfig& config = {});

  /// Maximum-likelihood lengthscales, warm-started at `init`.
  static GpModel fit(const Matrix& design, const Vector& y, const GpHyper& init, const GpConfig& config = {});

  Prediction predict(const Matrix& queries) const;
  PointPrediction predict_with_gradient(std::span<const double> x) const;

  const GpHyper& hyper() const { return hyper_; }
  double log_likelihood() const { return log_likelihood_; }
  const Matrix& design() const { return design_; }
  double mean_offset() const { return y_mean_; }
  std::size_t dim() const { return static_cast<std::size_t>(design_.cols()); }
  /// Lower Cholesky factor of the jittered correlation matrix.
  const Eigen::MatrixXd& factor() const { return chol_; }

 private:
  GpModel() = default;

  Matrix design_;
  double y_mean_ = 0.0;
  GpHyper hyper_;
  Eigen::MatrixXd chol_;
  Vector alpha_;  // (C + gI)^{-1} (y - mean)
  double log_likelihood_ = 0.0;
};

}  // namespace vorbo
