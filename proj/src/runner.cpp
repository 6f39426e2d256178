#include "sharpal/runner.hpp"

#include "sharpal/errors.hpp"
#include "sharpal/inner.hpp"
#include "sharpal/oracle.hpp"
#include "sharpal/test_suite.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace sharpal {

namespace {

constexpr double kGradientTolerance = 1e-6;

bool contains(const std::vector<int>& ids, int id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

int parse_id(const std::string& token) {
  std::size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw NotFoundError("bad problem id '" + token + "'");
  }
  if (used != token.size()) throw NotFoundError("bad problem id '" + token + "'");
  const auto ids = suite_ids();
  if (!contains(ids, id)) throw NotFoundError("unknown problem " + token);
  return id;
}

SolveReport failed_report(const Problem* problem, int id, Driver driver, const std::string& msg) {
  SolveReport r;
  r.problem_id = problem ? problem->id() : std::to_string(id);
  r.driver = driver;
  r.inform = 1;
  r.annotation = "error: " + msg;
  r.infeasibility = std::nan("");
  r.kkt_residual = std::nan("");
  r.f = std::nan("");
  return r;
}

SolveReport run_one(int id, Driver driver, const RunManifest& manifest,
                    const SolverConfig& config) {
  try {
    const Problem problem = prepare_problem(id, manifest);
    try {
      GlobalMinimizer gm;
      if (driver == Driver::exact) gm = make_global_minimizer();
      return solve(problem, driver, config, gm);
    } catch (const std::exception& e) {
      return failed_report(&problem, id, driver, e.what());
    }
  } catch (const std::exception& e) {
    return failed_report(nullptr, id, driver, e.what());
  }
}

// Opens manifest.out_path, or hands back `fallback` when it is empty.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

PropertyResult make_result(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::vector<PropertyResult> gradient_property(const RunManifest& manifest) {
  std::vector<PropertyResult> out;
  for (int id : manifest.problem_ids) {
    const Problem problem = prepare_problem(id, manifest);
    const auto points = random_probe_points(problem, 10, 2.0, manifest.seed + id);
    const GradientCheckReport rep = check_gradients(problem, points, manifest.seed + id);
    const double err = rep.max_error();
    out.push_back(make_result(fmt::format("gradients {}", problem.id()),
                              err <= kGradientTolerance, fmt::format("max rel err {:.3g}", err)));
  }
  return out;
}

std::vector<PropertyResult> lemma1a_property(const RunManifest& manifest) {
  std::vector<PropertyResult> out;
  for (int id : {501, 502, 507}) {
    const Problem problem = get_problem(id);
    std::mt19937_64 rng(manifest.seed + static_cast<std::uint64_t>(id));
    std::uniform_real_distribution<double> lambda_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> r_dist(1.0, 10.0);
    double worst = 0.0;
    double worst_cross = 0.0;
    bool ok = true;
    for (int pair = 0; pair < 5; ++pair) {
      Vector lambda(problem.m());
      for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = lambda_dist(rng);
      const double r = r_dist(rng);
      const OracleMinimum m = global_minimize_smoothing(problem, lambda, r, default_grid(problem));
      const double h_norm = problem.constraints(m.x).norm();
      const double gap = std::abs(m.t - h_norm) / m.resolution;
      const TGridMinimum tg = t_grid_minimize(problem, m.x, lambda, r, 2.0 * h_norm + 1.0);
      const double cross = std::abs(tg.t - h_norm) / tg.resolution;
      worst = std::max(worst, gap);
      worst_cross = std::max(worst_cross, cross);
      ok = ok && gap <= 2.0 && cross <= 2.0;
    }
    out.push_back(make_result(fmt::format("lemma1a {}", id), ok,
                              fmt::format("|t - ||h||| <= {:.3g} resolutions, t-grid {:.3g}",
                                          worst, worst_cross)));
  }
  return out;
}

std::vector<PropertyResult> remark2_property(const RunManifest& manifest) {
  std::vector<PropertyResult> out;
  const auto reports = run_suite(manifest, Driver::alg3);
  for (const auto& r : reports) {
    const int bad = ratio_bound_violations(r.trace);
    out.push_back(make_result(fmt::format("remark2 {}", r.problem_id), bad == 0,
                              fmt::format("{} of {} iterations violate", bad, r.trace.size())));
  }
  return out;
}

std::vector<PropertyResult> penalty_property(const RunManifest& manifest) {
  std::vector<PropertyResult> out;
  const SolverConfig config = make_solver_config(manifest);
  for (Driver d : {Driver::alg2, Driver::alg3, Driver::phr}) {
    int bad = 0;
    for (const auto& r : run_suite(manifest, d)) {
      bad += penalty_rule_violations(r.trace, config.tau, config.gamma);
    }
    out.push_back(make_result(fmt::format("penalty {}", to_string(d)), bad == 0,
                              fmt::format("{} violating iterations", bad)));
  }
  return out;
}

std::vector<PropertyResult> example1_property(const RunManifest&) {
  std::vector<PropertyResult> out;
  const double lambda = 0.0;
  const double r = 2.0;
  const double eps = 1e-4;
  const Example1Verdict v = example1_witness(lambda, r, eps);
  out.push_back(make_result(
      "example1 no stationary point", !v.witness_found,
      fmt::format("min grad norm {:.6g} at (x, t) = ({:.3g}, {:.3g}), threshold {:.6g}",
                  v.min_grad_norm, v.argmin_x, v.argmin_t, v.threshold_eps)));

  const double s = 0.1;
  const Problem problem = get_problem(502);
  const DualState dual(Vector::Constant(1, lambda), r);
  InnerConfig inner;
  const InnerResult res = minimize_xt(problem, dual, s, problem.start_point(), 1.0, 1e-10, inner);
  const double x = res.x(0);
  const double t_expected = std::sqrt(x * x + s * s);
  const BarrierStationaryPoint bp = example1_barrier_point(lambda, r, s);
  const bool ok = res.grad_norm <= 1e-10 && std::abs(res.t - t_expected) <= 1e-8 &&
                  std::abs(x - bp.x) <= 1e-8 && std::abs(res.t - bp.t) <= 1e-8;
  out.push_back(make_result(
      "example1 barrier stationary point", ok,
      fmt::format("grad norm {:.3g}, x {:.6g}, t {:.6g}, sqrt(x^2+s^2) {:.6g}", res.grad_norm, x,
                  res.t, t_expected)));
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<int> default_cutoff_problems() { return {513}; }

void RunManifest::validate() const {
  if (problem_ids.empty()) throw std::invalid_argument("manifest lists no problems");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

std::vector<int> parse_problem_ids(const std::string& text) {
  if (text == "all") return suite_ids();
  std::vector<int> out;
  for (const std::string& token : split(text, ',')) {
    if (token.empty()) throw NotFoundError("empty problem id in '" + text + "'");
    const auto dots = token.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_id(token));
      continue;
    }
    const int lo = parse_id(token.substr(0, dots));
    const int hi = parse_id(token.substr(dots + 2));
    if (lo > hi) throw NotFoundError("empty problem range '" + token + "'");
    for (int id = lo; id <= hi; ++id) out.push_back(parse_id(std::to_string(id)));
  }
  return out;
}

SolverConfig make_solver_config(const RunManifest& manifest) {
  SolverConfig config;
  manifest.overrides.apply(config);
  config.validate();
  return config;
}

Problem prepare_problem(int id, const RunManifest& manifest) {
  Problem problem = get_problem(id);
  if (!contains(manifest.cutoff_problems, id)) return problem;
  CutoffTransform transform;
  if (manifest.overrides.cutoff_M) transform.bound_M = *manifest.overrides.cutoff_M;
  return apply_cutoff(problem, transform);
}

std::vector<SolveReport> run_suite(const RunManifest& manifest, Driver driver) {
  manifest.validate();
  const SolverConfig config = make_solver_config(manifest);
  const auto& ids = manifest.problem_ids;
  std::vector<SolveReport> reports(ids.size());
  const auto count = static_cast<std::int64_t>(ids.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(manifest.workers)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto slot = static_cast<std::size_t>(i);
    reports[slot] = run_one(ids[slot], driver, manifest, config);
  }
  return reports;
}

int solved_count(const std::vector<SolveReport>& reports) {
  return static_cast<int>(
      std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.inform == 0; }));
}

int ratio_bound_violations(const OuterTrace& trace, double rounding) {
  int bad = 0;
  for (const auto& it : trace) {
    const double q = 2.0 * it.eps / it.r;
    const bool ratio_ok = it.h_norm / it.t <= std::sqrt(1.0 + q) * (1.0 + rounding);
    const bool t_ok = q < 1.0 && it.t <= std::sqrt((it.h_norm * it.h_norm + it.s * it.s) /
                                                   (1.0 - q)) * (1.0 + rounding);
    if (!ratio_ok || !t_ok) ++bad;
  }
  return bad;
}

int penalty_rule_violations(const OuterTrace& trace, double tau, double gamma) {
  int bad = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& it = trace[i];
    const bool kept = it.h_norm <= tau * it.h_norm_prev;
    const bool rule = kept ? it.r_next == it.r : it.r_next == gamma * it.r;
    const bool monotone = it.r_next >= it.r;
    const bool chained = i == 0 || trace[i - 1].r_next == it.r;
    if (!rule || !monotone || !chained) ++bad;
  }
  return bad;
}

const std::vector<std::string>& check_properties() {
  static const std::vector<std::string> names = {"gradients", "lemma1a", "remark2", "penalty",
                                                 "example1"};
  return names;
}

std::vector<PropertyResult> run_property(const std::string& name, const RunManifest& manifest) {
  if (name == "gradients") return gradient_property(manifest);
  if (name == "lemma1a") return lemma1a_property(manifest);
  if (name == "remark2") return remark2_property(manifest);
  if (name == "penalty") return penalty_property(manifest);
  if (name == "example1") return example1_property(manifest);
  throw NotFoundError("unknown property '" + name + "'");
}

int cmd_solve(const RunManifest& manifest, std::ostream& out, std::ostream&) {
  const auto reports = run_suite(manifest, manifest.driver);
  OutputTarget target(manifest.out_path, out);
  write_reports(target.get(), reports, manifest.format);
  return solved_count(reports) == static_cast<int>(reports.size()) ? 0 : 1;
}

int cmd_bench(const RunManifest& manifest, std::ostream& out, std::ostream&) {
  const std::vector<Driver> drivers = {Driver::alg2, Driver::alg3, Driver::phr};
  std::vector<std::vector<SolveReport>> results;
  for (Driver d : drivers) results.push_back(run_suite(manifest, d));

  nlohmann::json summary = nlohmann::json::array();
  nlohmann::json runs = nlohmann::json::array();
  bool all_solved = true;
  for (std::size_t i = 0; i < drivers.size(); ++i) {
    int inner = 0;
    for (const auto& r : results[i]) {
      inner += r.inner_iterations;
      runs.push_back(report_to_json(r));
    }
    const int solved = solved_count(results[i]);
    all_solved = all_solved && solved == static_cast<int>(results[i].size());
    summary.push_back({{"driver", to_string(drivers[i])},
                       {"solved", solved},
                       {"problems", results[i].size()},
                       {"inner_iterations", inner}});
  }
  const nlohmann::json document = {
      {"version", kTraceVersion}, {"summary", summary}, {"runs", runs}};

  switch (manifest.format) {
    case OutputFormat::table:
      out << "Driver  Solved  Int. It.\n";
      for (const auto& s : summary) {
        out << fmt::format("{:<6}  {:>2}/{:<3}  {}\n", s["driver"].get<std::string>(),
                           s["solved"].get<int>(), s["problems"].get<std::size_t>(),
                           s["inner_iterations"].get<int>());
      }
      for (std::size_t i = 0; i < drivers.size(); ++i) {
        out << "\n" << to_string(drivers[i]) << "\n";
        write_table(out, results[i]);
      }
      break;
    case OutputFormat::csv: {
      std::ostringstream body;
      for (std::size_t i = 0; i < drivers.size(); ++i) {
        std::ostringstream block;
        write_csv(block, results[i]);
        std::string line;
        std::istringstream lines(block.str());
        std::getline(lines, line);
        if (i == 0) out << "Driver," << line << '\n';
        while (std::getline(lines, line)) out << to_string(drivers[i]) << ',' << line << '\n';
      }
      break;
    }
    case OutputFormat::json:
      out << document.dump(2) << '\n';
      break;
  }
  if (!manifest.out_path.empty()) {
    std::ofstream file(manifest.out_path);
    if (!file) throw std::runtime_error("cannot open output file '" + manifest.out_path + "'");
    file << document.dump(2) << '\n';
  }
  return all_solved ? 0 : 1;
}

int cmd_check(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  const auto& names = manifest.properties.empty() ? check_properties() : manifest.properties;
  bool ok = true;
  for (const auto& name : names) {
    for (const auto& result : run_property(name, manifest)) {
      out << (result.passed ? "PASS  " : "FAIL  ") << result.name << "  " << result.detail
          << '\n';
      if (!result.passed) {
        err << "failed: " << result.name << " (" << result.detail << ")\n";
        ok = false;
      }
    }
  }
  return ok ? 0 : 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smoothed sharp augmented Lagrangian solvers"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string problems = "all";
  std::string driver = "alg2";
  std::string format = "table";
  std::string config_path;
  std::string cutoff_problems;
  std::string out_path;
  std::uint64_t seed = 0;
  int workers = 1;
  ConfigOverrides flags;
  double tol = 0, tau = 0, gamma = 0, r0 = 0, t0 = 0, cutoff_M = 0;
  int max_outer = 0;
  std::vector<std::string> properties;

  app.add_option("--problems", problems, "Problem ids: all, 502, 501..514, 501,503");
  app.add_option("--driver", driver, "alg2 | alg3 | phr | exact");
  auto* o_tol = app.add_option("--tol", tol, "Stopping tolerance");
  auto* o_tau = app.add_option("--tau", tau, "Infeasibility decrease factor");
  auto* o_gamma = app.add_option("--gamma", gamma, "Penalty growth factor");
  auto* o_r0 = app.add_option("--r0", r0, "Initial penalty");
  auto* o_t0 = app.add_option("--t0", t0, "Initial smoothing parameter");
  auto* o_max = app.add_option("--max-outer", max_outer, "Outer iteration limit");
  app.add_option("--format", format, "table | csv | json");
  app.add_option("--out", out_path, "Output file (bench: JSON traces)");
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed, "Seed for sampled checks");
  auto* o_cut = app.add_option("--cutoff-M", cutoff_M, "Cutoff transform bound M");
  app.add_option("--cutoff-problems", cutoff_problems,
                 "Problems solved through the cutoff transform (default 513, 'none' for none)");
  app.add_option("-j,--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* solve_cmd = app.add_subcommand("solve", "Solve problems with one driver");
  auto* bench_cmd = app.add_subcommand("bench", "Compare alg2, alg3 and phr on the problems");
  auto* check_cmd = app.add_subcommand("check", "Gradient checks and property suites");
  check_cmd->add_option("--property", properties, "gradients | lemma1a | remark2 | penalty | example1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  RunManifest manifest;
  try {
    manifest.problem_ids = parse_problem_ids(problems);
    manifest.driver = parse_driver(driver);
    manifest.format = parse_output_format(format);
    manifest.out_path = out_path;
    manifest.seed = seed;
    manifest.workers = workers;
    if (!cutoff_problems.empty()) {
      manifest.cutoff_problems =
          cutoff_problems == "none" ? std::vector<int>{} : parse_problem_ids(cutoff_problems);
    }
    if (!config_path.empty()) manifest.overrides = load_config_file(config_path);
    if (*o_tol) flags.tol = tol;
    if (*o_tau) flags.tau = tau;
    if (*o_gamma) flags.gamma = gamma;
    if (*o_r0) flags.r0 = r0;
    if (*o_t0) flags.t0 = t0;
    if (*o_max) flags.max_outer = max_outer;
    if (*o_cut) flags.cutoff_M = cutoff_M;
    manifest.overrides.merge(flags);
    manifest.properties = properties;
    for (const auto& p : properties) {
      const auto& known = check_properties();
      if (std::find(known.begin(), known.end(), p) == known.end()) {
        throw NotFoundError("unknown property '" + p + "'");
      }
    }
    manifest.validate();
    make_solver_config(manifest);
    if (manifest.overrides.cutoff_M && !(*manifest.overrides.cutoff_M > 0.0)) {
      throw std::invalid_argument("cutoff_M must be > 0");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*solve_cmd) return cmd_solve(manifest, out, err);
    if (*bench_cmd) return cmd_bench(manifest, out, err);
    if (*check_cmd) return cmd_check(manifest, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sharpal
