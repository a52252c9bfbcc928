#include "vorbo/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vorbo/bench.hpp"
#include "vorbo/csv.hpp"
#include "vorbo/driver.hpp"
#include "vorbo/errors.hpp"
#include "vorbo/nn_index.hpp"
#include "vorbo/sampling.hpp"

#ifndef VORBO_VERSION
#define VORBO_VERSION "dev"
#endif

namespace vorbo::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : csv::split(text)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse(item));
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

std::size_t parse_size(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("not a non-negative integer: '" + s + "'");
  }
}

/// Where a subcommand writes its CSV: explicit --out, else the directory from
/// the environment, else stdout.
struct Sink {
  std::optional<fs::path> path;

  static Sink resolve(const std::string& out_flag, const std::string& default_name) {
    if (!out_flag.empty() && out_flag != "-") return {fs::path(out_flag)};
    if (out_flag == "-") return {};
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return {fs::path(dir) / default_name};
    return {};
  }

  void write(const std::string& body, const json& meta, std::ostream& out) const {
    if (!path) {
      out << body;
      return;
    }
    if (path->has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path->parent_path(), ec);
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw IoError("cannot open output file " + path->string());
    f << body;
    if (!f) throw IoError("failed writing " + path->string());
    std::ofstream m(path->string() + ".meta.json", std::ios::binary);
    if (!m) throw IoError("cannot open metadata file " + path->string() + ".meta.json");
    m << meta.dump(2) << '\n';
  }
};

json base_meta(const std::string& command) {
  json meta;
  meta["command"] = command;
  meta["version"] = VORBO_VERSION;
  return meta;
}

// ---------------------------------------------------------------- run

struct RunFlags {
  std::string problem;
  std::size_t dim = 0;
  std::string methods = "vor";
  std::size_t budget = 0;
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  std::string seeds;
  std::size_t candidates = 0;
  std::size_t init = 0;
  std::size_t refit_full = 200;
  std::size_t refit_every = 25;
  int bisection_iters = kDefaultBisectionIters;
  bool record_x = false;
  bool no_timing = false;
  std::size_t jobs = 1;
  std::string out;
};

void add_run(CLI::App& app, RunFlags& f) {
  app.add_option("--problem", f.problem, "Test problem (see `problems`)")->required();
  app.add_option("--dim", f.dim, "Input dimension")->required();
  app.add_option("--method", f.methods, "Comma-separated methods: vor,lhs,sobol,opt")->capture_default_str();
  app.add_option("--budget", f.budget, "Total evaluations including the initial design")->required();
  app.add_option("--reps", f.reps, "Replicates (seeds seed, seed+1, ...)")->capture_default_str();
  app.add_option("--seed", f.seed, "First replicate seed")->capture_default_str();
  app.add_option("--seeds", f.seeds, "Explicit comma-separated seed list (overrides --seed/--reps)");
  app.add_option("--candidates", f.candidates, "Candidate set size (default min(5000, 100*dim))");
  app.add_option("--init", f.init, "Initial design size (default 3*dim)");
  app.add_option("--refit-full", f.refit_full, "Refit hyperparameters every iteration before this many")
      ->capture_default_str();
  app.add_option("--refit-every", f.refit_every, "Refit interval afterwards")->capture_default_str();
  app.add_option("--bisection-iters", f.bisection_iters, "Voronoi walk bisection rounds")->capture_default_str();
  app.add_flag("--record-x", f.record_x, "Include evaluated inputs as x1..xP columns");
  app.add_flag("--no-timing", f.no_timing, "Write zeros in timing columns (byte-reproducible output)");
  app.add_option("--jobs", f.jobs, "Parallel (method, seed) cells")->capture_default_str();
  app.add_option("--out", f.out, "Output CSV path ('-' for stdout)");
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.problem = f.problem;
  cfg.dim = f.dim;
  cfg.methods = parse_list<Method>(f.methods, [](const std::string& s) { return parse_method(s); });
  cfg.budget = f.budget;
  if (!f.seeds.empty()) {
    for (const auto& s : split_list(f.seeds)) cfg.seeds.push_back(parse_size(s));
  } else {
    if (f.reps == 0) throw ConfigError("reps must be positive");
    for (std::size_t r = 0; r < f.reps; ++r) cfg.seeds.push_back(f.seed + r);
  }
  if (f.candidates) cfg.candidates = f.candidates;
  if (f.init) cfg.initial_size = f.init;
  cfg.refit_full = f.refit_full;
  cfg.refit_every = f.refit_every;
  cfg.bisection_iters = f.bisection_iters;
  cfg.record_x = f.record_x;
  cfg.timing = !f.no_timing;
  cfg.jobs = f.jobs;
  cfg.validate();

  const SuiteResult result = run_suite(cfg);
  std::ostringstream body;
  write_trajectory_csv(body, cfg, result);

  json meta = base_meta("run");
  json c;
  c["problem"] = cfg.problem;
  c["dim"] = cfg.dim;
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  c["methods"] = methods;
  c["budget"] = cfg.budget;
  c["initial_size"] = cfg.initial_count();
  c["candidates"] = cfg.candidate_count();
  c["refit_full"] = cfg.refit_full;
  c["refit_every"] = cfg.refit_every;
  c["bisection_iters"] = cfg.bisection_iters;
  c["lengthscale_bounds"] = {cfg.gp.lengthscale_lower, cfg.gp.lengthscale_upper};
  c["nugget"] = cfg.gp.nugget;
  c["record_x"] = cfg.record_x;
  c["timing"] = cfg.timing;
  c["jobs"] = cfg.jobs;
  meta["config"] = c;
  meta["seeds"] = cfg.seeds;
  json shifts = json::object();
  for (auto seed : cfg.seeds) {
    const TestProblem p = problem_for_seed(cfg, seed);
    if (p.shift()) shifts[std::to_string(seed)] = std::vector<double>(p.shift()->begin(), p.shift()->end());
  }
  if (!shifts.empty()) meta["problem_shift"] = shifts;
  json failures = json::array();
  for (const auto& cell : result.cells) {
    if (cell.error) {
      failures.push_back({{"method", std::string(to_string(cell.method))}, {"seed", cell.seed}, {"error", *cell.error}});
      err << "cell " << to_string(cell.method) << "/" << cell.seed << " failed: " << *cell.error << '\n';
    }
  }
  meta["failures"] = failures;

  Sink::resolve(f.out, "run.csv").write(body.str(), meta, out);
  return result.ok() ? kExitOk : kExitCellFailure;
}

// ---------------------------------------------------------------- boundary-study

struct StudyFlags {
  std::string sizes = "10,100,1000";
  std::string dims = "2,10,100";
  std::string strategies = "unif,rect,proj";
  std::string metrics = "l1,l2,linf";
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  int bisection_iters = kDefaultBisectionIters;
  std::size_t jobs = 1;
  std::string out;
};

void add_study(CLI::App& app, StudyFlags& f) {
  app.add_option("--sizes", f.sizes, "Design sizes N")->capture_default_str();
  app.add_option("--dims", f.dims, "Dimensions P")->capture_default_str();
  app.add_option("--strategies", f.strategies, "Walk strategies")->capture_default_str();
  app.add_option("--metrics", f.metrics, "Metrics")->capture_default_str();
  app.add_option("--reps", f.reps, "Replicates")->capture_default_str();
  app.add_option("--seed", f.seed, "Master seed")->capture_default_str();
  app.add_option("--count", f.count, "Walks per cell")->capture_default_str();
  app.add_option("--bisection-iters", f.bisection_iters, "Bisection rounds")->capture_default_str();
  app.add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
  app.add_option("--out", f.out, "Output CSV path ('-' for stdout)");
}

int cmd_study(const StudyFlags& f, std::ostream& out) {
  BoundaryStudyConfig cfg;
  cfg.sizes = parse_list<std::size_t>(f.sizes, parse_size);
  cfg.dims = parse_list<std::size_t>(f.dims, parse_size);
  cfg.strategies = parse_list<Strategy>(f.strategies, [](const std::string& s) { return parse_strategy(s); });
  cfg.metrics = parse_list<Metric>(f.metrics, [](const std::string& s) { return parse_metric(s); });
  cfg.reps = f.reps;
  cfg.seed = f.seed;
  cfg.count = f.count;
  cfg.bisection_iters = f.bisection_iters;
  cfg.jobs = f.jobs;
  if (cfg.reps == 0 || cfg.count == 0 || cfg.jobs == 0) throw ConfigError("reps, count and jobs must be positive");
  if (cfg.bisection_iters < 1) throw ConfigError("bisection iterations must be >= 1");
  for (auto n : cfg.sizes)
    if (n == 0) throw ConfigError("design sizes must be positive");
  for (auto p : cfg.dims)
    if (p == 0) throw ConfigError("dimensions must be positive");

  std::ostringstream body;
  write_boundary_csv(body, boundary_study(cfg));

  json meta = base_meta("boundary-study");
  json c;
  c["sizes"] = cfg.sizes;
  c["dims"] = cfg.dims;
  json s = json::array(), m = json::array();
  for (auto x : cfg.strategies) s.push_back(std::string(to_string(x)));
  for (auto x : cfg.metrics) m.push_back(std::string(to_string(x)));
  c["strategies"] = s;
  c["metrics"] = m;
  c["reps"] = cfg.reps;
  c["seed"] = cfg.seed;
  c["count"] = cfg.count;
  c["bisection_iters"] = cfg.bisection_iters;
  c["halfway_rule"] = false;
  c["jobs"] = cfg.jobs;
  meta["config"] = c;
  Sink::resolve(f.out, "boundary_study.csv").write(body.str(), meta, out);
  return kExitOk;
}

// ---------------------------------------------------------------- candidates

struct CandFlags {
  std::size_t dim = 2;
  std::size_t n = 10;
  std::string design;
  std::string scheme = "vor";
  std::string strategy = "final";
  std::string metric = "linf";
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::size_t iteration = 0;
  std::size_t incumbent = 0;
  bool no_halfway = false;
  int bisection_iters = kDefaultBisectionIters;
  std::string out;
};

void add_candidates(CLI::App& app, CandFlags& f) {
  app.add_option("--dim", f.dim, "Dimension of a generated design")->capture_default_str();
  app.add_option("--n", f.n, "Size of a generated LHS design")->capture_default_str();
  app.add_option("--design", f.design, "CSV file of design points (overrides --dim/--n)");
  app.add_option("--scheme", f.scheme, "Candidate scheme: vor, lhs or sobol")->capture_default_str();
  app.add_option("--strategy", f.strategy, "vor walk strategy: final, unif, rect or proj")->capture_default_str();
  app.add_option("--metric", f.metric, "Metric for unif/rect/proj strategies")->capture_default_str();
  app.add_option("--count", f.count, "Number of candidates")->capture_default_str();
  app.add_option("--seed", f.seed, "Seed")->capture_default_str();
  app.add_option("--iteration", f.iteration, "Acquisition iteration (selects rect/proj for final)")
      ->capture_default_str();
  app.add_option("--incumbent", f.incumbent, "Design row treated as the incumbent")->capture_default_str();
  app.add_flag("--no-halfway", f.no_halfway, "Keep raw cube-wall candidates");
  app.add_option("--bisection-iters", f.bisection_iters, "Bisection rounds")->capture_default_str();
  app.add_option("--out", f.out, "Output CSV path ('-' for stdout)");
}

int cmd_candidates(const CandFlags& f, std::ostream& out) {
  const Rng master(f.seed);
  Matrix design;
  if (!f.design.empty()) {
    std::ifstream in(f.design);
    if (!in) throw IoError("cannot read design file " + f.design);
    try {
      design = csv::read_matrix(in);
    } catch (const std::runtime_error& e) {
      throw IoError("bad design file " + f.design + ": " + e.what());
    }
  } else {
    if (f.dim == 0 || f.n == 0) throw ConfigError("--dim and --n must be positive");
    Rng rng = master.substream({stream_key("design")});
    design = lhs(f.n, f.dim, rng);
  }
  const auto P = static_cast<std::size_t>(design.cols());
  if (f.count == 0) throw ConfigError("--count must be positive");
  if (f.bisection_iters < 1) throw ConfigError("bisection iterations must be >= 1");

  Rng rng = master.substream({stream_key("candidates")});
  Matrix cands;
  if (f.scheme == "lhs") {
    cands = lhs(f.count, P, rng);
  } else if (f.scheme == "sobol") {
    cands = sobol(f.count, P);
  } else if (f.scheme == "vor") {
    if (f.incumbent >= static_cast<std::size_t>(design.rows())) throw ConfigError("--incumbent out of range");
    if (f.strategy == "final") {
      cands = scheme_final(design, f.count, f.iteration, f.incumbent, rng, f.bisection_iters).points;
    } else {
      const Strategy strategy = parse_strategy(f.strategy);
      const NnIndex index(design, parse_metric(f.metric));
      if (strategy == Strategy::Proj) {
        const Matrix pre = lhs(f.count, P, rng);
        cands = project_sample(design, index, pre, {f.bisection_iters, !f.no_halfway}, rng).points;
      } else {
        DirectOptions opts;
        opts.strategy = strategy;
        opts.incumbent = f.incumbent;
        opts.bisection_iters = f.bisection_iters;
        opts.halfway = !f.no_halfway;
        cands = direct_sample(design, index, f.count, opts, rng).points;
      }
    }
  } else {
    throw ConfigError("unknown scheme '" + f.scheme + "' (expected vor, lhs or sobol)");
  }

  std::ostringstream body;
  body << "kind";
  for (std::size_t p = 1; p <= P; ++p) body << ",x" << p;
  body << '\n';
  auto emit = [&](const Matrix& m, const std::string& tag) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      body << tag;
      for (Eigen::Index p = 0; p < m.cols(); ++p) body << ',' << csv::format(m(i, p));
      body << '\n';
    }
  };
  emit(design, "design");
  emit(cands, f.scheme);

  json meta = base_meta("candidates");
  meta["config"] = {{"design", f.design.empty() ? json("lhs") : json(f.design)},
                    {"n", design.rows()},
                    {"dim", P},
                    {"scheme", f.scheme},
                    {"strategy", f.strategy},
                    {"metric", f.metric},
                    {"count", f.count},
                    {"seed", f.seed},
                    {"iteration", f.iteration},
                    {"incumbent", f.incumbent},
                    {"halfway_rule", !f.no_halfway},
                    {"bisection_iters", f.bisection_iters}};
  Sink::resolve(f.out, "candidates.csv").write(body.str(), meta, out);
  return kExitOk;
}

// ---------------------------------------------------------------- problems

int cmd_problems(const std::string& out_flag, std::ostream& out) {
  std::ostringstream body;
  body << "name,native_lower,native_upper,min_dim,max_dim,known_best\n";
  for (const auto& p : problem_catalog()) {
    body << p.name << ',' << csv::format(p.native_lower) << ',' << csv::format(p.native_upper) << ',' << p.min_dim
         << ',' << p.max_dim << ',' << (p.known_best ? csv::format(*p.known_best) : "") << '\n';
  }
  Sink::resolve(out_flag, "problems.csv").write(body.str(), base_meta("problems"), out);
  return kExitOk;
}

// Splices config-file tokens in right after the subcommand name so that
// explicit flags, which come later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::optional<std::string> config;
  std::size_t insert_at = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config" && i + 1 < args.size()) {
      config = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      config = a.substr(9);
      continue;
    }
    out.push_back(a);
  }
  if (!config) return out;
  if (!out.empty() && out.front().rfind("-", 0) != 0) insert_at = 1;
  const auto tokens = config_tokens(*config);
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(insert_at), tokens.begin(), tokens.end());
  return out;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

std::vector<BoundaryRow> boundary_study(const BoundaryStudyConfig& cfg) {
  struct Cell {
    std::size_t rep, n, dim;
    Strategy strategy;
  };
  std::vector<Cell> cells;
  for (std::size_t rep = 0; rep < cfg.reps; ++rep)
    for (auto n : cfg.sizes)
      for (auto dim : cfg.dims)
        for (auto s : cfg.strategies) cells.push_back({rep, n, dim, s});

  const std::size_t per_cell = cfg.metrics.size();
  std::vector<BoundaryRow> rows(cells.size() * per_cell);
  const Rng master(cfg.seed);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      try {
        const Cell& c = cells[i];
        Rng design_rng = master.substream({stream_key("design"), c.n, c.dim, c.rep});
        Matrix design(static_cast<Eigen::Index>(c.n), static_cast<Eigen::Index>(c.dim));
        for (Eigen::Index k = 0; k < design.size(); ++k) design.data()[k] = design_rng.uniform();
        for (std::size_t m = 0; m < per_cell; ++m) {
          Rng walk_rng = master.substream(
              {stream_key("walks"), c.n, c.dim, c.rep, static_cast<std::uint64_t>(c.strategy)});
          const double prop =
              boundary_proportion(design, cfg.count, c.strategy, cfg.metrics[m], walk_rng, cfg.bisection_iters);
          rows[i * per_cell + m] = {c.strategy, cfg.metrics[m], c.n, c.dim, c.rep, prop};
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (cfg.jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(cfg.jobs, cells.size()); ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows) {
  out << "strategy,metric,N,P,rep,prop_boundary\n";
  for (const auto& r : rows) {
    out << to_string(r.strategy) << ',' << to_string(r.metric) << ',' << r.n << ',' << r.dim << ',' << r.rep << ','
        << csv::format(r.proportion) << '\n';
  }
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian optimization with Voronoi-boundary candidates", "vorbo"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", VORBO_VERSION);

  RunFlags run_flags;
  StudyFlags study_flags;
  CandFlags cand_flags;
  std::string problems_out;

  auto* run_cmd = app.add_subcommand("run", "Replicated optimization experiments -> trajectory CSV");
  add_run(*run_cmd, run_flags);
  auto* study_cmd = app.add_subcommand("boundary-study", "Share of Voronoi walks ending on the cube boundary");
  add_study(*study_cmd, study_flags);
  auto* cand_cmd = app.add_subcommand("candidates", "Dump a design and a candidate cloud");
  add_candidates(*cand_cmd, cand_flags);
  auto* prob_cmd = app.add_subcommand("problems", "List test problems");
  prob_cmd->add_option("--out", problems_out, "Output CSV path ('-' for stdout)");
  for (auto* sub : {run_cmd, study_cmd, cand_cmd, prob_cmd}) {
    sub->add_option("--config")->description("Flat key = value file; explicit flags win");
  }

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  // CLI11 consumes the vector from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << VORBO_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags, out, err);
    if (study_cmd->parsed()) return cmd_study(study_flags, out);
    if (cand_cmd->parsed()) return cmd_candidates(cand_flags, out);
    if (prob_cmd->parsed()) return cmd_problems(problems_out, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace vorbo::cli
