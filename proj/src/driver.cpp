#include "vorbo/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <ostream>
#include <thread>

#include "vorbo/acquisition.hpp"
#include "vorbo/bench.hpp"
#include "vorbo/csv.hpp"
#include "vorbo/errors.hpp"
#include "vorbo/rng.hpp"
#include "vorbo/sampling.hpp"

namespace vorbo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// Nudges x off any existing design row (L-infinity within 1e-12).
void avoid_duplicate(Vector& x, const Matrix& X, Rng& rng) {
  auto duplicate = [&] {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if ((X.row(i).transpose() - x).lpNorm<Eigen::Infinity>() <= 1e-12) return true;
    }
    return false;
  };
  while (duplicate()) {
    for (Eigen::Index p = 0; p < x.size(); ++p) x[p] = std::clamp(x[p] + rng.uniform(-1e-6, 1e-6), 0.0, 1.0);
  }
}

}  // namespace

Method parse_method(std::string_view name) {
  if (name == "vor") return Method::Vor;
  if (name == "lhs") return Method::Lhs;
  if (name == "sobol") return Method::Sobol;
  if (name == "opt") return Method::Opt;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected vor, lhs, sobol or opt)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Vor: return "vor";
    case Method::Lhs: return "lhs";
    case Method::Sobol: return "sobol";
    case Method::Opt: return "opt";
  }
  return "?";
}

std::size_t ExperimentConfig::candidate_count() const {
  return candidates.value_or(std::min<std::size_t>(5000, 100 * dim));
}

std::size_t ExperimentConfig::initial_count() const { return initial_size.value_or(3 * dim); }

void ExperimentConfig::validate() const {
  if (problem.empty()) throw ConfigError("no problem given");
  if (dim == 0) throw ConfigError("dimension must be positive");
  if (methods.empty()) throw ConfigError("no methods given");
  if (seeds.empty()) throw ConfigError("no seeds given");
  if (initial_count() < 2) throw ConfigError("initial design needs at least 2 points");
  if (budget <= initial_count()) {
    throw ConfigError("budget " + std::to_string(budget) + " must exceed the initial design size " +
                      std::to_string(initial_count()));
  }
  if (candidate_count() == 0) throw ConfigError("candidate count must be positive");
  if (refit_every == 0) throw ConfigError("refit interval must be positive");
  if (bisection_iters < 1) throw ConfigError("bisection iterations must be >= 1");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  const bool uses_sobol = std::find(methods.begin(), methods.end(), Method::Sobol) != methods.end();
  if (uses_sobol && dim > sobol_max_dim()) {
    throw ConfigError("sobol supports at most " + std::to_string(sobol_max_dim()) + " dimensions");
  }
  Rng probe(0);
  make_problem(problem, dim, probe);
}

bool refit_due(std::size_t acquisition, const ExperimentConfig& config) {
  if (acquisition < config.refit_full) return true;
  return (acquisition - config.refit_full) % config.refit_every == 0;
}

Matrix initial_design(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng = Rng(seed).substream({stream_key("initial-design")});
  return lhs(config.initial_count(), config.dim, rng);
}

TestProblem problem_for_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Rng rng = Rng(seed).substream({stream_key("problem")});
  return make_problem(config.problem, config.dim, rng);
}

std::vector<TrajectoryRecord> run_bo(const ExperimentConfig& config, Method method, std::uint64_t seed) {
  config.validate();
  const std::size_t P = config.dim;
  const std::size_t C = config.candidate_count();
  const Rng master(seed);

  const TestProblem problem = problem_for_seed(config, seed);

  Matrix X = initial_design(config, seed);
  Vector y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) y[i] = problem.evaluate(row(X, i));

  std::vector<TrajectoryRecord> records;
  records.reserve(config.budget - static_cast<std::size_t>(X.rows()));
  Vector lengthscales = GpHyper::initial(X).lengthscales;
  const auto start = Clock::now();

  for (std::size_t a = 0; static_cast<std::size_t>(X.rows()) < config.budget; ++a) {
    Rng rng = master.substream({stream_key("acquisition"), a});
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.method = method;

    const auto t0 = Clock::now();
    std::optional<GpModel> model;
    if (refit_due(a, config)) {
      try {
        GpHyper init;
        init.lengthscales = lengthscales;
        model = GpModel::fit(X, y, init, config.gp);
        lengthscales = model->hyper().lengthscales;
      } catch (const SurrogateFitError&) {
        rec.fit_failed = true;
      }
    }
    if (!model) model = GpModel::condition(X, y, lengthscales, config.gp);
    const auto t1 = Clock::now();

    Eigen::Index incumbent = 0;
    const double y_min = y.minCoeff(&incumbent);
    Vector x;
    switch (method) {
      case Method::Vor: {
        const CandidateSet cands =
            scheme_final(X, C, a, static_cast<std::size_t>(incumbent), rng, config.bisection_iters);
        x = argmax_discrete(*model, cands, y_min).argmax;
        break;
      }
      case Method::Lhs:
        x = argmax_discrete(*model, lhs(C, P, rng), y_min).argmax;
        break;
      case Method::Sobol:
        x = argmax_discrete(*model, sobol(C, P, 1 + static_cast<std::uint64_t>(a) * C), y_min).argmax;
        break;
      case Method::Opt:
        x = multistart_opt(*model, y_min, row(X, incumbent), rng).argmax;
        break;
    }
    const auto t2 = Clock::now();

    avoid_duplicate(x, X, rng);
    const double fx = problem.evaluate(as_span(x));
    X.conservativeResize(X.rows() + 1, Eigen::NoChange);
    X.row(X.rows() - 1) = x.transpose();
    y.conservativeResize(y.size() + 1);
    y[y.size() - 1] = fx;

    rec.iteration = static_cast<std::size_t>(X.rows());
    rec.x = std::move(x);
    rec.y = fx;
    rec.y_best = std::min(y_min, fx);
    if (config.timing) {
      rec.fit_ms = ms_between(t0, t1);
      rec.cand_ms = ms_between(t1, t2);
      rec.elapsed_ms = ms_between(start, Clock::now());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

bool SuiteResult::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return !c.error; });
}

SuiteResult run_suite(const ExperimentConfig& config) {
  config.validate();
  SuiteResult result;
  for (Method m : config.methods) {
    for (std::uint64_t s : config.seeds) result.cells.push_back({m, s, {}, std::nullopt});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < result.cells.size(); i = next.fetch_add(1)) {
      CellResult& cell = result.cells[i];
      try {
        cell.records = run_bo(config, cell.method, cell.seed);
      } catch (const std::exception& e) {
        cell.records.clear();
        cell.error = e.what();
      }
    }
  };
  const std::size_t threads = std::min(config.jobs, result.cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return result;
}

std::string trajectory_header(const ExperimentConfig& config) {
  std::string h = "seed,method,problem,dim,iteration";
  if (config.record_x) {
    for (std::size_t p = 1; p <= config.dim; ++p) h += ",x" + std::to_string(p);
  }
  h += ",y,y_best,elapsed_ms,cand_ms,fit_ms";
  return h;
}

void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config, const SuiteResult& result) {
  out << trajectory_header(config) << '\n';
  for (const CellResult& cell : result.cells) {
    const std::string prefix = std::to_string(cell.seed) + "," + std::string(to_string(cell.method)) + "," +
                               config.problem + "," + std::to_string(config.dim) + ",";
    if (cell.error) {
      // Failure marker row: iteration -1, NaN outputs.
      out << prefix << "-1";
      if (config.record_x) {
        for (std::size_t p = 0; p < config.dim; ++p) out << ",nan";
      }
      out << ",nan,nan,0,0,0\n";
      continue;
    }
    for (const TrajectoryRecord& r : cell.records) {
      out << prefix << r.iteration;
      if (config.record_x) {
        for (Eigen::Index p = 0; p < r.x.size(); ++p) out << ',' << csv::format(r.x[p]);
      }
      out << ',' << csv::format(r.y) << ',' << csv::format(r.y_best) << ',' << csv::format(r.elapsed_ms) << ','
          << csv::format(r.cand_ms) << ',' << csv::format(r.fit_ms) << '\n';
    }
  }
}

}  // namespace vorbo
