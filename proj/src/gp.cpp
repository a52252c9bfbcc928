#include "vorbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "vorbo/errors.hpp"
#include "vorbo/optim.hpp"

namespace vorbo {

namespace {

Eigen::MatrixXd correlation(const Matrix& X, const Vector& ls) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd C(n, n);
  const Vector inv = ls.cwiseInverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    C(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = ((X.row(i) - X.row(j)).array().square() * inv.transpose().array()).sum();
      C(i, j) = C(j, i) = std::exp(-r);
    }
  }
  return C;
}

std::optional<Eigen::MatrixXd> cholesky(Eigen::MatrixXd R) {
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXd L = llt.matrixL();
  if (!L.allFinite() || (L.diagonal().array() <= 0.0).any()) return std::nullopt;
  return L;
}

void check_inputs(const Matrix& X, const Vector& y) {
  require(X.rows() == y.size(), "gp: design and output sizes differ");
  require(X.rows() >= 1 && X.cols() >= 1, "gp: empty design");
  require(y.allFinite(), "gp: non-finite outputs");
}

}  // namespace

GpHyper GpHyper::initial(const Matrix& design) {
  const Eigen::Index n = design.rows();
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) d2.push_back((design.row(i) - design.row(j)).squaredNorm());
  double start = 0.1 * static_cast<double>(design.cols());
  if (!d2.empty()) {
    const auto k = static_cast<std::size_t>(0.1 * static_cast<double>(d2.size() - 1));
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(k), d2.end());
    if (d2[k] > 0.0) start = d2[k];
  }
  GpHyper h;
  h.lengthscales = Vector::Constant(design.cols(), start);
  return h;
}

double kernel(const GpHyper& hyper, std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() == static_cast<std::size_t>(hyper.lengthscales.size()),
          "kernel: dimension mismatch");
  require((hyper.lengthscales.array() > 0.0).all(), "kernel: lengthscales must be positive");
  double r = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) {
    const double d = a[p] - b[p];
    r += d * d / hyper.lengthscales[static_cast<Eigen::Index>(p)];
  }
  return hyper.signal_scale * std::exp(-r);
}

LikelihoodEval profile_log_likelihood(const Matrix& X, const Vector& y, const Vector& ls, double nugget,
                                      bool with_gradient) {
  check_inputs(X, y);
  require(ls.size() == X.cols(), "profile_log_likelihood: lengthscale dimension mismatch");
  require((ls.array() > 0.0).all(), "profile_log_likelihood: lengthscales must be positive");
  const Eigen::Index n = X.rows();
  const Vector centered = y.array() - y.mean();

  const Eigen::MatrixXd C = correlation(X, ls);
  Eigen::MatrixXd R = C;
  R.diagonal().array() += nugget;
  const auto L = cholesky(R);
  if (!L) throw SurrogateFitError("kernel matrix not positive definite");

  const Vector alpha = L->transpose().triangularView<Eigen::Upper>().solve(
      L->triangularView<Eigen::Lower>().solve(centered));
  const double quad = std::max(centered.dot(alpha), 1e-300);
  const double tau2 = quad / static_cast<double>(n);
  const double nd = static_cast<double>(n);

  LikelihoodEval out;
  out.signal_scale = tau2;
  out.value = -0.5 * nd * std::log(2.0 * std::numbers::pi * tau2) - L->diagonal().array().log().sum() - 0.5 * nd;
  if (!with_gradient) return out;

  const Eigen::MatrixXd Rinv = L->transpose().triangularView<Eigen::Upper>().solve(
      L->triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n)));
  // d llik / d log l_p = 1/2 sum_ij (a_i a_j / tau2 - Rinv_ij) C_ij (x_ip - x_jp)^2 / l_p
  const Eigen::MatrixXd weight = ((alpha * alpha.transpose()) / tau2 - Rinv).cwiseProduct(C);
  out.gradient = Vector::Zero(X.cols());
  for (Eigen::Index p = 0; p < X.cols(); ++p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        const double d = X(i, p) - X(j, p);
        acc += weight(i, j) * d * d;
      }
    }
    // Off-diagonal pairs appear twice in the symmetric sum.
    out.gradient[p] = acc / ls[p];
  }
  return out;
}

namespace {

struct Conditioned {
  Eigen::MatrixXd chol;
  Vector alpha;
  double nugget;
};

Conditioned factorize(const Matrix& X, const Vector& centered, const Vector& ls, double nugget, double max_nugget) {
  const Eigen::MatrixXd C = correlation(X, ls);
  for (double g = nugget; g <= max_nugget * (1.0 + 1e-9); g *= 10.0) {
    Eigen::MatrixXd R = C;
    R.diagonal().array() += g;
    auto L = cholesky(R);
    if (!L) continue;
    Vector alpha = L->transpose().triangularView<Eigen::Upper>().solve(L->triangularView<Eigen::Lower>().solve(centered));
    return {std::move(*L), std::move(alpha), g};
  }
  throw SurrogateFitError("kernel matrix not positive definite up to nugget " + std::to_string(max_nugget));
}

}  // namespace

GpModel GpModel::condition(const Matrix& X, const Vector& y, const Vector& ls, const GpConfig& config) {
  GpHyper hyper;
  hyper.lengthscales = ls;
  hyper.nugget = config.nugget;
  hyper.signal_scale = 0.0;  // profiled below
  return condition(X, y, hyper, config);
}

GpModel GpModel::condition(const Matrix& X, const Vector& y, const GpHyper& hyper, const GpConfig& config) {
  check_inputs(X, y);
  require(hyper.lengthscales.size() == X.cols(), "GpModel::condition: lengthscale dimension mismatch");
  require((hyper.lengthscales.array() > 0.0).all(), "GpModel::condition: lengthscales must be positive");
  require(hyper.signal_scale >= 0.0, "GpModel::condition: negative signal scale");
  require(hyper.nugget > 0.0, "GpModel::condition: nugget must be positive");

  GpModel model;
  model.design_ = X;
  model.y_mean_ = y.mean();
  const Vector centered = y.array() - model.y_mean_;
  Conditioned c = factorize(X, centered, hyper.lengthscales, hyper.nugget, std::max(config.max_nugget, hyper.nugget));
  model.chol_ = std::move(c.chol);
  model.alpha_ = std::move(c.alpha);

  const double nd = static_cast<double>(X.rows());
  const double profiled = std::max(centered.dot(model.alpha_), 1e-300) / nd;
  model.hyper_ = hyper;
  model.hyper_.nugget = c.nugget;
  if (hyper.signal_scale == 0.0) model.hyper_.signal_scale = profiled;
  model.log_likelihood_ = -0.5 * nd * std::log(2.0 * std::numbers::pi * profiled) -
                          model.chol_.diagonal().array().log().sum() - 0.5 * nd;
  return model;
}

GpModel GpModel::fit(const Matrix& X, const Vector& y, const GpHyper& init, const GpConfig& config) {
  check_inputs(X, y);
  require(X.rows() >= 2, "GpModel::fit: need at least two design points");
  require(init.lengthscales.size() == X.cols(), "GpModel::fit: initial lengthscale dimension mismatch");

  const Eigen::Index P = X.cols();
  const Vector lo = Vector::Constant(P, std::log(config.lengthscale_lower));
  const Vector hi = Vector::Constant(P, std::log(config.lengthscale_upper));
  const Vector theta0 = init.lengthscales.array().max(config.lengthscale_lower).min(config.lengthscale_upper).log();

  // Smallest jitter that factorizes at the warm start; held fixed while fitting.
  double nugget = config.nugget;
  while (true) {
    try {
      profile_log_likelihood(X, y, theta0.array().exp(), nugget, false);
      break;
    } catch (const SurrogateFitError&) {
      nugget *= 10.0;
      if (nugget > config.max_nugget * (1.0 + 1e-9)) {
        throw SurrogateFitError("kernel matrix not positive definite at warm start up to nugget " +
                                std::to_string(config.max_nugget));
      }
    }
  }

  const Objective objective = [&](const Vector& theta, Vector& grad) {
    try {
      const LikelihoodEval e = profile_log_likelihood(X, y, theta.array().exp(), nugget, true);
      grad = -e.gradient;
      return -e.value;
    } catch (const SurrogateFitError&) {
      grad = Vector::Zero(theta.size());
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  BoxOptions opts;
  opts.max_iters = config.max_iters;
  opts.grad_tol = config.grad_tol;
  opts.rel_f_tol = 1e-10;
  const BoxResult best = minimize_box(objective, theta0, lo, hi, opts);

  GpConfig fixed = config;
  fixed.nugget = nugget;
  const Vector ls = best.x.array().exp().max(config.lengthscale_lower).min(config.lengthscale_upper);
  return condition(X, y, ls, fixed);
}

Prediction GpModel::predict(const Matrix& queries) const {
  require(queries.cols() == design_.cols(), "GpModel::predict: dimension mismatch");
  const Eigen::Index n = design_.rows();
  const Eigen::Index m = queries.rows();
  const Vector inv = hyper_.lengthscales.cwiseInverse();

  Eigen::MatrixXd cross(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = ((design_.row(i) - queries.row(j)).array().square() * inv.transpose().array()).sum();
      cross(i, j) = std::exp(-r);
    }
  }
  Prediction out;
  out.mean = (cross.transpose() * alpha_).array() + y_mean_;
  const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(cross);
  const Vector var = hyper_.signal_scale * (1.0 - v.colwise().squaredNorm().array()).max(0.0);
  out.sd = var.array().sqrt();
  return out;
}

PointPrediction GpModel::predict_with_gradient(std::span<const double> x) const {
  require(x.size() == dim(), "GpModel::predict_with_gradient: dimension mismatch");
  const Eigen::Index n = design_.rows();
  const Eigen::Index P = design_.cols();
  const Eigen::Map<const Eigen::RowVectorXd> q(x.data(), P);
  const Vector inv = hyper_.lengthscales.cwiseInverse();

  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c[i] = std::exp(-((design_.row(i) - q).array().square() * inv.transpose().array()).sum());
  }
  // dc_i/dx_p = -2 c_i (x_p - X_ip) / l_p
  Eigen::MatrixXd dc(n, P);
  for (Eigen::Index i = 0; i < n; ++i) {
    dc.row(i) = (-2.0 * c[i]) * ((q - design_.row(i)).array() * inv.transpose().array()).matrix();
  }
  const Vector w = chol_.transpose().triangularView<Eigen::Upper>().solve(
      chol_.triangularView<Eigen::Lower>().solve(c));

  PointPrediction out;
  out.mean = y_mean_ + c.dot(alpha_);
  out.mean_grad = dc.transpose() * alpha_;
  const double var = hyper_.signal_scale * (1.0 - c.dot(w));
  out.sd = std::sqrt(std::max(var, 0.0));
  out.var_grad = -2.0 * hyper_.signal_scale * (dc.transpose() * w);
  return out;
}

}  // namespace vorbo
