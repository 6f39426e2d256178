#pragma once

#include "sharpal/inner.hpp"
#include "sharpal/lagrangian.hpp"
#include "sharpal/problem.hpp"
#include "sharpal/schedule.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sharpal {

/// Outer-loop parameters. Defaults are the values used in the numerical
/// experiments of the method (tau = 0.9, gamma = 10, tol = 1e-8, t0 = 1,
/// lambda0 = 0, r0 = 10, multiplier box +-1e20).
struct SolverConfig {
  double lambda_min = -1e20;
  double lambda_max = 1e20;
  double tau = 0.9;
  double gamma = 10.0;
  double tol = 1e-8;
  double r0 = 10.0;
  double t0 = 1.0;
  int max_outer = 100;
  double r_max = 1e20;
  ScheduleRule eps_rule = ScheduleRule::adaptive;
  ScheduleRule s_rule = ScheduleRule::adaptive;
  double s_floor = kBarrierFloor;
  InnerConfig inner;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

enum class Driver { alg2, alg3, phr, exact };

Driver parse_driver(const std::string& name);
const char* to_string(Driver driver);

/// One outer iteration k: the subproblem parameters and the point it produced.
struct OuterIteration {
  int k = 0;
  Vector x;             // x^{k+1}
  double t = 0.0;       // t_{k+1} (unused by the PHR driver)
  Vector lambda;        // lambda^{k+1}, before projection
  Vector lambda_bar;    // projected lambda^{k+1}
  double r = 0.0;       // r_k, the penalty used in the subproblem
  double r_next = 0.0;  // r_{k+1}
  double s = 0.0;
  double eps = 0.0;
  double h_norm_prev = 0.0;  // ||h(x^k)||
  double h_norm = 0.0;       // ||h(x^{k+1})||
  double kkt_residual = 0.0;  // stopping quantity at iteration k+1
  double inner_grad_norm = 0.0;
  int inner_iterations = 0;
  InnerStatus inner_status = InnerStatus::converged;
};

using OuterTrace = std::vector<OuterIteration>;

struct SolveReport {
  std::string problem_id;
  Driver driver = Driver::alg2;
  int inform = 1;          // 0 solved, 1 iteration budget or penalty cap
  std::string annotation;  // reason when inform != 0
  int outer_iterations = 0;
  int inner_iterations = 0;
  Vector x;
  double f = 0.0;
  Vector lambda;            // last raw multiplier
  Vector lambda_effective;  // multiplier implicit in the stopping gradient
  double t = 0.0;
  double r = 0.0;
  double infeasibility = 0.0;
  double kkt_residual = 0.0;
  OuterTrace trace;
};

inline constexpr const char* kPenaltyTooLarge = "penalty too large";
inline constexpr const char* kMaxIterations = "maximum iterations";

/// lambda_bar + (r / t) h componentwise. Throws std::invalid_argument for t <= 0.
Vector update_multiplier(const Vector& lambda_bar, double r, const Vector& h, double t);

/// Componentwise clamp onto [lambda_min, lambda_max]^m.
Vector project_multiplier(const Vector& lambda, double lambda_min, double lambda_max);

/// Penalty rule: keep r when ||h_new|| <= tau ||h_old||, otherwise gamma r.
double next_penalty(double r, double h_norm_new, double h_norm_old, double tau, double gamma);

/// Smoothing parameter of the fixed-smoothing driver: sqrt(||h||^2 + s^2).
double fixed_smoothing_t(double h_norm, double s);

/// Inexact sharp Lagrangian, smoothing parameter fixed per iteration:
/// t_{k+1} = sqrt(||h(x^k)||^2 + s_k^2), then x^{k+1} from minimize_x.
SolveReport solve_alg2(const Problem& problem, const SolverConfig& config);

/// Inexact sharp Lagrangian with (x, t) minimized jointly on the barrier
/// function with parameter s_k.
SolveReport solve_alg3(const Problem& problem, const SolverConfig& config);

/// PHR augmented Lagrangian baseline with the same penalty rule, projection,
/// and schedules.
SolveReport solve_phr(const Problem& problem, const SolverConfig& config);

/// Global minimizer of the smoothing function for given (lambda, r), as
/// produced by the oracle grid search. `resolution` is the final grid spacing.
struct GlobalMinimum {
  Vector x;
  double t = 0.0;
  double value = 0.0;
  double resolution = 0.0;
};

using GlobalMinimizer =
    std::function<GlobalMinimum(const Problem&, const Vector& lambda, double r)>;

/// Exact sharp Lagrangian (modified subgradient) scheme: each subproblem is a
/// global minimization; stops when t_{k+1} <= 10 * resolution, otherwise
/// lambda += (r/t) h and r doubles. Only for n <= 3 (UnsupportedError).
SolveReport solve_exact(const Problem& problem, const SolverConfig& config,
                        const GlobalMinimizer& global_minimizer);

SolveReport solve(const Problem& problem, Driver driver, const SolverConfig& config,
                  const GlobalMinimizer& global_minimizer = {});

}  // namespace sharpal
