#pragma once

#include "sharpal/config_io.hpp"
#include "sharpal/outer.hpp"
#include "sharpal/report_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sharpal {

/// Problems that get the cutoff transform unless told otherwise; 513 has an
/// objective unbounded below.
std::vector<int> default_cutoff_problems();

struct RunManifest {
  std::vector<int> problem_ids;
  Driver driver = Driver::alg2;
  ConfigOverrides overrides;
  OutputFormat format = OutputFormat::table;
  std::string out_path;  // empty: standard output
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<int> cutoff_problems = default_cutoff_problems();
  std::vector<std::string> properties;  // cmd_check selection; empty means all

  void validate() const;
};

/// Accepts "all", single ids, inclusive ranges "a..b" and comma lists of
/// those. Throws NotFoundError for ids outside the suite.
std::vector<int> parse_problem_ids(const std::string& text);

SolverConfig make_solver_config(const RunManifest& manifest);

/// Suite problem with the cutoff transform applied when the manifest asks.
Problem prepare_problem(int id, const RunManifest& manifest);

/// Runs every manifest problem with `driver` on up to manifest.workers
/// threads. Results come back in manifest order. A run that throws yields a
/// report with inform=1 and the message as annotation.
std::vector<SolveReport> run_suite(const RunManifest& manifest, Driver driver);

/// Number of reports with inform=0.
int solved_count(const std::vector<SolveReport>& reports);

int cmd_solve(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_bench(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int cmd_check(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Property names accepted by cmd_check.
const std::vector<std::string>& check_properties();

/// Full command line front end. Exit codes: 0 all solved or passed,
/// 1 some run unsolved or some check failed, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sharpal

namespace sharpal {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Iterations of a joint (x, t) trace breaking either ratio bound
///   ||h|| / t <= sqrt(1 + 2 eps / r),  t <= sqrt((||h||^2 + s^2) / (1 - 2 eps / r)).
/// A relative slack of `rounding` absorbs floating point error.
int ratio_bound_violations(const OuterTrace& trace, double rounding = 1e-12);

/// Iterations where r_next disagrees with the tau test or r decreases.
int penalty_rule_violations(const OuterTrace& trace, double tau, double gamma);

/// Runs one named property of cmd_check; throws NotFoundError for bad names.
std::vector<PropertyResult> run_property(const std::string& name, const RunManifest& manifest);

}  // namespace sharpal
