#include "vorbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vorbo/errors.hpp"
#include "vorbo/optim.hpp"
#include "vorbo/sampling.hpp"

namespace vorbo {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double ei_at(const GpModel& model, std::span<const double> x, double y_min) {
  const PointPrediction p = model.predict_with_gradient(x);
  return expected_improvement(p.mean, p.sd, y_min);
}

}  // namespace

double expected_improvement(double mean, double sd, double y_min) {
  const double gain = y_min - mean;
  if (!(sd > kSdFloor)) return std::max(gain, 0.0);
  const double z = gain / sd;
  return std::max(gain * normal_cdf(z) + sd * normal_pdf(z), 0.0);
}

Vector ei(const GpModel& model, const Matrix& queries, double y_min) {
  const Prediction p = model.predict(queries);
  Vector out(queries.rows());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = expected_improvement(p.mean[i], p.sd[i], y_min);
  return out;
}

EiGradient ei_with_gradient(const GpModel& model, std::span<const double> x, double y_min, GradientMode mode,
                            double fd_step) {
  const auto P = static_cast<Eigen::Index>(model.dim());
  const PointPrediction p = model.predict_with_gradient(x);
  EiGradient out;
  out.value = expected_improvement(p.mean, p.sd, y_min);

  if (mode == GradientMode::Analytic && p.sd > kSdFloor) {
    // dEI/dmean = -Phi(z), dEI/dsd = phi(z), dsd = dvar / (2 sd)
    const double z = (y_min - p.mean) / p.sd;
    const Vector sd_grad = p.var_grad / (2.0 * p.sd);
    out.gradient = -normal_cdf(z) * p.mean_grad + normal_pdf(z) * sd_grad;
    return out;
  }

  out.gradient.resize(P);
  std::vector<double> probe(x.begin(), x.end());
  for (Eigen::Index k = 0; k < P; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    probe[kk] = x[kk] + fd_step;
    const double up = ei_at(model, probe, y_min);
    probe[kk] = x[kk] - fd_step;
    const double down = ei_at(model, probe, y_min);
    probe[kk] = x[kk];
    out.gradient[k] = (up - down) / (2.0 * fd_step);
  }
  return out;
}

AcqResult argmax_discrete(const GpModel& model, const Matrix& candidates, double y_min) {
  require(candidates.rows() >= 1, "argmax_discrete: empty candidate set");
  const Vector values = ei(model, candidates, y_min);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  AcqResult out;
  out.argmax = candidates.row(best).transpose();
  out.value = values[best];
  out.evaluations = static_cast<std::size_t>(values.size());
  out.index = static_cast<std::size_t>(best);
  return out;
}

AcqResult argmax_discrete(const GpModel& model, const CandidateSet& candidates, double y_min) {
  return argmax_discrete(model, candidates.points, y_min);
}

AcqResult multistart_opt(const GpModel& model, double y_min, std::span<const double> incumbent, Rng& rng,
                         const MultistartOptions& options) {
  const std::size_t P = model.dim();
  require(incumbent.size() == P, "multistart_opt: incumbent dimension mismatch");
  const std::size_t n_lhs = options.lhs_starts == 0 ? 2 * P : options.lhs_starts;

  Matrix starts(static_cast<Eigen::Index>(n_lhs + 1), static_cast<Eigen::Index>(P));
  starts.topRows(static_cast<Eigen::Index>(n_lhs)) = lhs(n_lhs, P, rng);
  starts.row(static_cast<Eigen::Index>(n_lhs)) =
      Eigen::Map<const Eigen::RowVectorXd>(incumbent.data(), static_cast<Eigen::Index>(P));

  const Vector lower = Vector::Zero(static_cast<Eigen::Index>(P));
  const Vector upper = Vector::Ones(static_cast<Eigen::Index>(P));
  BoxOptions box;
  box.max_iters = options.max_iters;
  box.grad_tol = options.grad_tol;

  AcqResult best;
  best.value = -1.0;
  for (Eigen::Index s = 0; s < starts.rows(); ++s) {
    const Vector x0 = starts.row(s).transpose();
    const double start_value = ei_at(model, as_span(x0), y_min);
    ++best.evaluations;
    // EI can be tiny in absolute terms; rescale so tolerances stay meaningful.
    const double scale = start_value > 1e-100 ? start_value : 1.0;
    std::size_t evals = 0;
    const Objective objective = [&](const Vector& x, Vector& grad) {
      ++evals;
      const EiGradient e = ei_with_gradient(model, as_span(x), y_min);
      grad = -e.gradient / scale;
      return -e.value / scale;
    };
    BoxResult r = minimize_box(objective, x0, lower, upper, box);
    best.evaluations += evals;
    double value = -r.value * scale;
    Vector point = r.x;
    if (start_value >= value) {
      value = start_value;
      point = x0;
    }
    if (value > best.value) {
      best.value = value;
      best.argmax = point;
      best.index = static_cast<std::size_t>(s);
    }
  }
  return best;
}

}  // namespace vorbo
