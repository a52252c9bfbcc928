// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.
//
//   vorbo_acceptance            run all criteria
//   vorbo_acceptance --only N   run criterion N

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "vorbo/acquisition.hpp"
#include "vorbo/csv.hpp"
#include "vorbo/driver.hpp"
#include "vorbo/gp.hpp"
#include "vorbo/sampling.hpp"
#include "vorbo/vorcands.hpp"

namespace fs = std::filesystem;
using namespace vorbo;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Matrix uniform_design(std::size_t n, std::size_t dim, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
  return m;
}

double plain_distance(Metric metric, const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const Eigen::RowVectorXd d = (a - b).cwiseAbs();
  if (metric == Metric::L1) return d.sum();
  if (metric == Metric::L2) return d.norm();
  return d.maxCoeff();
}

struct Shell {
  int status;
  std::string out;
};

Shell shell(const std::string& cmd) {
  Shell r{-1, {}};
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 65536> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cli() { return VORBO_CLI_PATH; }

// ---------------------------------------------------------------- AC1

Verdict ac1_equidistance() {
  const auto t0 = Clock::now();
  Rng rng(101);
  const Matrix X = uniform_design(50, 10, rng);
  std::size_t checked = 0, boundary = 0, bracket_bad = 0, equi_bad = 0;
  double worst = 0.0;
  for (Metric metric : {Metric::L1, Metric::L2, Metric::LInf}) {
    WalkBatch batch;
    batch.bisection_iters = 30;
    batch.origins.resize(200);
    batch.directions.resize(200, 10);
    for (std::size_t w = 0; w < 200; ++w) {
      batch.origins[w] = rng.index(50);
      batch.directions.row(static_cast<Eigen::Index>(w)) =
          sphere_direction(10, rng).transpose() * direction_scale(10);
    }
    const CandidateSet c = vorwalk(X, batch, metric);
    for (std::size_t w = 0; w < c.size(); ++w) {
      const auto i = static_cast<Eigen::Index>(w);
      const std::size_t o = c.origin[w];
      const Eigen::RowVectorXd u = c.directions.row(i);
      const Eigen::RowVectorXd xo = X.row(static_cast<Eigen::Index>(o));
      // Bracket: width 2^-30, lower probe in cell and cube, upper probe out of one.
      auto in_cell = [&](const Eigen::RowVectorXd& q) {
        const double d0 = plain_distance(metric, q, xo);
        for (Eigen::Index j = 0; j < X.rows(); ++j) {
          if (static_cast<std::size_t>(j) == o) continue;
          const double dj = plain_distance(metric, q, X.row(j));
          if (dj < d0 || (dj == d0 && static_cast<std::size_t>(j) < o)) return false;
        }
        return true;
      };
      auto in_cube = [](const Eigen::RowVectorXd& q) { return (q.array() >= 0.0).all() && (q.array() <= 1.0).all(); };
      const Eigen::RowVectorXd lo = xo + c.step_lower[i] * u;
      const Eigen::RowVectorXd hi = xo + c.step_upper[i] * u;
      const bool bracket = c.step_upper[i] - c.step_lower[i] == std::ldexp(1.0, -30) && in_cube(lo) &&
                           in_cell(lo) && (!in_cube(hi) || !in_cell(hi));
      if (!bracket) ++bracket_bad;
      if (c.boundary_hit[w]) {
        ++boundary;
        continue;
      }
      const Eigen::RowVectorXd p = c.points.row(i);
      double other = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < X.rows(); ++j)
        if (static_cast<std::size_t>(j) != o) other = std::min(other, plain_distance(metric, p, X.row(j)));
      const double gap = std::abs(plain_distance(metric, p, xo) - other);
      worst = std::max(worst, gap);
      if (gap > 1e-6) ++equi_bad;
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = bracket_bad == 0 && equi_bad == 0 && checked > 0 && secs < 5.0;
  v.detail = "600 walks, " + std::to_string(checked) + " interior / " + std::to_string(boundary) +
             " wall; bracket violations " + std::to_string(bracket_bad) + ", equidistance violations " +
             std::to_string(equi_bad) + " (max gap " + fmt(worst) + "), " + fmt(secs) + " s (limit 5 s)";
  return v;
}

// ---------------------------------------------------------------- AC2

Verdict ac2_boundary_study() {
  const auto t0 = Clock::now();
  const fs::path out = fs::temp_directory_path() / ("vorbo_ac2_" + std::to_string(::getpid()) + ".csv");
  const Shell r = shell(cli() + " boundary-study --reps 10 --seed 1 --out " + out.string());
  const double secs = seconds_since(t0);
  if (r.status != 0) return {false, "boundary-study exited with status " + std::to_string(r.status)};

  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  // (strategy, metric, N, P, rep) -> proportion
  std::map<std::tuple<std::string, std::string, int, int, int>, double> prop;
  while (std::getline(in, line)) {
    const auto f = csv::split(line);
    if (f.size() != 6) return {false, "malformed row: " + line};
    prop[{f[0], f[1], std::stoi(f[2]), std::stoi(f[3]), std::stoi(f[4])}] = std::stod(f[5]);
  }
  fs::remove(out);
  fs::remove(out.string() + ".meta.json");
  if (prop.size() != 810) return {false, "expected 810 rows, got " + std::to_string(prop.size())};

  const std::vector<std::string> strategies{"unif", "rect", "proj"}, metrics{"l1", "l2", "linf"};
  const std::vector<int> sizes{10, 100, 1000}, dims{2, 10, 100};
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what) {
    if (failures.size() < 8) failures.push_back(what);
    else if (failures.size() == 8) failures.push_back("...");
  };
  std::size_t a = 0, b = 0, c = 0, d = 0;
  std::map<char, std::size_t> failed;
  auto fail_check = [&](char check, const std::string& what) {
    ++failed[check];
    fail(what);
  };
  for (int rep = 0; rep < 10; ++rep) {
    for (int n : sizes) {
      for (const auto& m : metrics) {
        const double v = prop[{"proj", m, n, 100, rep}];
        ++a;
        if (v > 0.05) fail_check('a', "(a) proj/" + m + " N=" + std::to_string(n) + " rep " + std::to_string(rep) + ": " + fmt(v));
      }
      for (int p : dims) {
        const double rect = prop[{"rect", "linf", n, p, rep}];
        for (const auto& m : metrics) {
          const double unif = prop[{"unif", m, n, p, rep}];
          ++b;
          if (rect > unif) {
            fail_check('b', "(b) N=" + std::to_string(n) + " P=" + std::to_string(p) + " rep " + std::to_string(rep) +
                 ": rect/linf " + fmt(rect) + " > unif/" + m + " " + fmt(unif));
          }
        }
      }
    }
    for (const auto& s : strategies) {
      for (const auto& m : metrics) {
        for (int p : dims) {
          const double small = prop[{s, m, 10, p, rep}], large = prop[{s, m, 1000, p, rep}];
          ++c;
          if (large > small) {
            fail_check('c', "(c) " + s + "/" + m + " P=" + std::to_string(p) + " rep " + std::to_string(rep) + ": N=1000 " +
                 fmt(large) + " > N=10 " + fmt(small));
          }
        }
      }
    }
    for (int p : {10, 100}) {
      for (int n : sizes) {
        const double l1 = prop[{"unif", "l1", n, p, rep}], l2 = prop[{"unif", "l2", n, p, rep}],
                     li = prop[{"unif", "linf", n, p, rep}];
        ++d;
        if (!(l1 >= l2 && l2 >= li)) {
          fail_check('d', "(d) N=" + std::to_string(n) + " P=" + std::to_string(p) + " rep " + std::to_string(rep) + ": " +
               fmt(l1) + ", " + fmt(l2) + ", " + fmt(li));
        }
      }
    }
  }
  Verdict v;
  v.pass = failures.empty() && secs < 600.0;
  auto tally = [&](char check, std::size_t total) {
    return "(" + std::string(1, check) + ") " + std::to_string(total - failed[check]) + "/" + std::to_string(total);
  };
  v.detail = "checks passed " + tally('a', a) + ", " + tally('b', b) + ", " + tally('c', c) + ", " + tally('d', d) +
             "; " + fmt(secs) + " s (limit 600 s)";
  for (const auto& f : failures) v.detail += "\n    " + f;
  return v;
}

// ---------------------------------------------------------------- AC3

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Eigen::MatrixXd dense_kernel(const Matrix& A, const Matrix& B, const Vector& ls, double tau2) {
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      K(i, j) = tau2 * std::exp(-((A.row(i) - B.row(j)).array().square() / ls.transpose().array()).sum());
  return K;
}

Vector toy_outputs(const Matrix& X) {
  Vector y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < X.cols(); ++p) s += std::sin(4.0 * M_PI * std::pow(X(i, p) - 0.5, 2)) + X(i, p);
    y[i] = s;
  }
  return y;
}

Verdict ac3_gp_oracle() {
  const auto t0 = Clock::now();
  Rng rng(303);
  double worst_moment = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.index(18), dim = 1 + rng.index(4);
    const Matrix X = uniform_design(n, dim, rng);
    const Vector y = toy_outputs(X);
    Vector ls(static_cast<Eigen::Index>(dim));
    // Lengthscales up to 0.5 keep cond(R) below ~1e6, where double precision
    // itself can resolve 1e-10.
    for (Eigen::Index p = 0; p < ls.size(); ++p) ls[p] = rng.uniform(0.02, 0.5);
    GpConfig cfg;
    cfg.nugget = 1e-6;
    const GpModel model = GpModel::condition(X, y, ls, cfg);
    const double tau2 = model.hyper().signal_scale, g = model.hyper().nugget;
    // Extended-precision explicit inverse.
    LongMatrix K = dense_kernel(X, X, ls, tau2).cast<long double>();
    K.diagonal().array() += static_cast<long double>(tau2 * g);
    const LongMatrix Kinv = K.inverse();
    const LongVector yc = (y.array() - y.mean()).matrix().cast<long double>();
    const Matrix Q = uniform_design(20, dim, rng);
    const LongMatrix k = dense_kernel(X, Q, ls, tau2).cast<long double>();
    const Prediction pred = model.predict(Q);
    for (Eigen::Index j = 0; j < Q.rows(); ++j) {
      const auto mean = static_cast<double>(y.mean() + k.col(j).dot(Kinv * yc));
      const auto var = static_cast<double>(std::max(tau2 - k.col(j).dot(Kinv * k.col(j)), 0.0L));
      worst_moment =
          std::max({worst_moment, std::abs(pred.mean[j] - mean), std::abs(pred.sd[j] * pred.sd[j] - var)});
    }
  }

  double worst_grad = 0.0;
  const Matrix X = uniform_design(18, 3, rng);
  const Vector y = toy_outputs(X);
  for (int k = 0; k < 20; ++k) {
    Vector theta(3);
    for (Eigen::Index p = 0; p < 3; ++p) theta[p] = rng.uniform(std::log(0.05), std::log(3.0));
    const LikelihoodEval e = profile_log_likelihood(X, y, theta.array().exp(), 1e-6);
    for (Eigen::Index p = 0; p < 3; ++p) {
      Vector up = theta, down = theta;
      up[p] += 1e-5;
      down[p] -= 1e-5;
      const double fd = (profile_log_likelihood(X, y, up.array().exp(), 1e-6, false).value -
                         profile_log_likelihood(X, y, down.array().exp(), 1e-6, false).value) /
                        2e-5;
      worst_grad = std::max(worst_grad, std::abs(e.gradient[p] - fd) / std::max(std::abs(fd), 1e-3));
    }
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = worst_moment <= 1e-10 && worst_grad <= 1e-4 && secs < 10.0;
  v.detail = "max mean/variance error " + fmt(worst_moment) + " (limit 1e-10) over 30 designs N<=20; max relative gradient "
             "error " + fmt(worst_grad) + " (limit 1e-4) at 20 points; " + fmt(secs) + " s (limit 10 s)";
  return v;
}

// ---------------------------------------------------------------- AC4

Verdict ac4_ei_monte_carlo() {
  const auto t0 = Clock::now();
  Rng rng(404);
  constexpr int kSamples = 1000000;
  int outside = 0;
  double worst_z = 0.0;
  for (int t = 0; t < 50; ++t) {
    // y_min within 3 sd of the mean, so the sample sees enough improvements.
    const double mean = rng.uniform(-2.0, 2.0), sd = rng.uniform(0.05, 2.0);
    const double y_min = mean + sd * rng.uniform(-3.0, 3.0);
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      const double imp = std::max(y_min - (mean + sd * rng.normal()), 0.0);
      sum += imp;
      sum2 += imp * imp;
    }
    const double mc = sum / kSamples;
    const double se = std::sqrt(std::max(sum2 / kSamples - mc * mc, 0.0) / (kSamples - 1));
    const double z = std::abs(expected_improvement(mean, sd, y_min) - mc) / se;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++outside;
  }
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = outside == 0 && secs < 30.0;
  v.detail = std::to_string(outside) + " of 50 triples beyond 3 SE (max " + fmt(worst_z) + " SE), 10^6 samples each; " +
             fmt(secs) + " s (limit 30 s)";
  return v;
}

// ---------------------------------------------------------------- AC5

Verdict ac5_scaling() {
  Rng rng(505);
  const Matrix X = uniform_design(2000, 100, rng);
  std::string detail;
  bool pass = true;
  for (std::size_t iteration : {0, 1}) {
    const auto t0 = Clock::now();
    const CandidateSet c = scheme_final(X, 5000, iteration, 0, rng);
    const double secs = seconds_since(t0);
    const bool ok = c.size() == 5000 && secs < 30.0;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : "; ") + (iteration == 0 ? "rect" : "proj") + " " +
              std::to_string(c.size()) + " candidates in " + fmt(secs) + " s";
  }
  return {pass, "N=2000, P=100: " + detail + " (limit 30 s each)"};
}

// ---------------------------------------------------------------- AC6

Verdict ac6_bo_comparison() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.problem = "ackley";
  cfg.dim = 5;
  cfg.budget = 100;
  cfg.methods = {Method::Vor, Method::Lhs, Method::Opt};
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  const SuiteResult result = run_suite(cfg);
  if (!result.ok()) return {false, "a cell failed"};

  std::map<Method, std::vector<double>> finals;
  std::map<Method, double> cand_ms;
  for (const auto& cell : result.cells) {
    finals[cell.method].push_back(cell.records.back().y_best);
    for (const auto& r : cell.records) cand_ms[cell.method] += r.cand_ms;
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
  };
  const double med_vor = median(finals[Method::Vor]), med_lhs = median(finals[Method::Lhs]);
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = med_vor <= med_lhs && cand_ms[Method::Vor] <= 0.5 * cand_ms[Method::Opt] && secs < 1800.0;
  v.detail = "median final y_best vor " + fmt(med_vor, 4) + " vs lhs " + fmt(med_lhs, 4) + " (opt " +
             fmt(median(finals[Method::Opt]), 4) + "); acquisition time vor " + fmt(cand_ms[Method::Vor] / 1000.0) +
             " s vs opt " + fmt(cand_ms[Method::Opt] / 1000.0) + " s (ratio " +
             fmt(cand_ms[Method::Vor] / cand_ms[Method::Opt]) + ", limit 0.5); " + fmt(secs) + " s (limit 1800 s)";
  return v;
}

// ---------------------------------------------------------------- AC7

Verdict ac7_determinism() {
  const std::vector<std::pair<std::string, std::string>> commands{
      {"run", "run --problem ackley --dim 3 --method vor,lhs,sobol,opt --budget 14 --reps 2 --seed 5 --record-x "
              "--no-timing --jobs 2 --out -"},
      {"boundary-study", "boundary-study --sizes 10,100 --dims 2,10 --reps 2 --count 200 --seed 3 --jobs 2 --out -"},
      {"candidates vor", "candidates --dim 3 --n 30 --scheme vor --count 500 --seed 9 --out -"},
      {"candidates vor/proj", "candidates --dim 4 --n 30 --scheme vor --strategy proj --metric l2 --count 300 "
                              "--seed 9 --out -"},
      {"candidates lhs", "candidates --dim 2 --n 10 --scheme lhs --count 300 --seed 2 --out -"},
      {"candidates sobol", "candidates --dim 2 --n 10 --scheme sobol --count 300 --seed 2 --out -"},
      {"problems", "problems --out -"},
  };
  std::vector<std::string> bad;
  for (const auto& [name, args] : commands) {
    const Shell a = shell(cli() + " " + args), b = shell(cli() + " " + args);
    if (a.status != 0 || b.status != 0 || a.out.empty() || a.out != b.out) bad.push_back(name);
  }
  Verdict v;
  v.pass = bad.empty();
  v.detail = std::to_string(commands.size() - bad.size()) + " of " + std::to_string(commands.size()) +
             " invocations byte-identical across two runs";
  for (const auto& b : bad) v.detail += "\n    differs or failed: " + b;
  return v;
}

// ---------------------------------------------------------------- AC8

// Independent Sobol construction for the first four dimensions from their
// primitive polynomials and initial direction numbers.
std::vector<std::vector<double>> reference_sobol(std::size_t n, std::size_t dim) {
  struct Poly {
    unsigned degree, a;
    std::vector<std::uint32_t> m;
  };
  const std::vector<Poly> polys{{0, 0, {}}, {1, 0, {1}}, {2, 1, {1, 3}}, {3, 1, {1, 3, 1}}};
  constexpr unsigned kBits = 32;
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<std::uint32_t> v(kBits);
    if (d == 0) {
      for (unsigned k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
    } else {
      const Poly& p = polys[d];
      std::vector<std::uint32_t> m(kBits);
      for (unsigned k = 0; k < p.degree; ++k) m[k] = p.m[k];
      for (unsigned k = p.degree; k < kBits; ++k) {
        std::uint32_t val = m[k - p.degree] ^ (m[k - p.degree] << p.degree);
        for (unsigned j = 1; j < p.degree; ++j)
          if ((p.a >> (p.degree - 1 - j)) & 1u) val ^= m[k - j] << j;
        m[k] = val;
      }
      for (unsigned k = 0; k < kBits; ++k) v[k] = m[k] << (kBits - 1 - k);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t gray = i ^ (i >> 1);
      std::uint32_t x = 0;
      for (unsigned k = 0; k < kBits; ++k)
        if ((gray >> k) & 1u) x ^= v[k];
      pts[i][d] = std::ldexp(static_cast<double>(x), -static_cast<int>(kBits));
    }
  }
  return pts;
}

Verdict ac8_lhs_sobol() {
  Rng rng(808);
  std::size_t lhs_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.index(300), dim = 1 + rng.index(20);
    const Matrix m = lhs(n, dim, rng);
    for (Eigen::Index p = 0; p < m.cols(); ++p) {
      std::vector<int> hits(n, 0);
      bool ok = true;
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double v = m(i, p);
        if (!(v >= 0.0 && v < 1.0)) {
          ok = false;
          break;
        }
        const auto k = static_cast<std::size_t>(std::floor(v * static_cast<double>(n)));
        // Guard the floor against rounding at a stratum edge.
        if (k >= n || v < static_cast<double>(k) / n || v >= static_cast<double>(k + 1) / n) {
          ok = false;
          break;
        }
        ++hits[k];
      }
      if (!ok || std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) ++lhs_bad;
    }
  }
  std::size_t sobol_bad = 0;
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    const Matrix s = sobol(8, dim, 0);
    const auto ref = reference_sobol(8, dim);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t p = 0; p < dim; ++p)
        if (s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) != ref[i][p]) ++sobol_bad;
  }
  Verdict v;
  v.pass = lhs_bad == 0 && sobol_bad == 0;
  v.detail = "LHS stratification failures " + std::to_string(lhs_bad) + " over 100 random (n, P); Sobol mismatches " +
             std::to_string(sobol_bad) + " over the first 8 points in P=1..4";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"equidistance of Voronoi walk candidates", ac1_equidistance},
      {"boundary-study ordinal reproduction", ac2_boundary_study},
      {"GP moments and likelihood gradient vs oracles", ac3_gp_oracle},
      {"EI vs Monte Carlo", ac4_ei_monte_carlo},
      {"5000 candidates at N=2000, P=100", ac5_scaling},
      {"Ackley P=5 vor vs lhs vs opt", ac6_bo_comparison},
      {"byte-identical reruns of every subcommand", ac7_determinism},
      {"LHS stratification and Sobol points", ac8_lhs_sobol},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: vorbo_acceptance [--only N]\n";
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "AC" << k + 1 << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ": " << v.detail
              << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
