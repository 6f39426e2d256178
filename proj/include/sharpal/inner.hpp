#pragma once

#include "sharpal/lagrangian.hpp"
#include "sharpal/line_search.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sharpal {

/// Settings of the limited-memory quasi-Newton subproblem solver.
struct InnerConfig {
  int max_iterations = 5000;
  int memory = 10;
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_backtracks = 40;        // function evaluations per line search
  double t_boundary_fraction = 0.99;  // trial t never drops below (1 - kappa) t
  bool record_values = false;     // keep the objective value of every iterate

  /// Throws std::invalid_argument unless 0 < c1 < c2 < 1, 0 < kappa < 1 and
  /// the counts are positive.
  void validate() const;
};

enum class InnerStatus {
  converged,
  max_iterations,
  line_search_failure,
  non_finite,
};

const char* to_string(InnerStatus status);

struct InnerResult {
  Vector x;
  double t = 0.0;        // final t (minimize_xt) or the fixed t (minimize_x)
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  InnerStatus status = InnerStatus::max_iterations;
  std::string diagnostic;
  double min_trial_t = 0.0;  // smallest t evaluated (minimize_xt only)
  std::vector<double> values;  // filled when record_values is set
};

/// Hook that bounds the step length along a direction, e.g. to keep a
/// variable strictly positive. Returns +inf when unbounded.
using StepBound = std::function<double(const Vector& z, const Vector& direction)>;

struct LbfgsResult {
  Vector z;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  InnerStatus status = InnerStatus::max_iterations;
  std::string diagnostic;
  std::vector<double> values;
};

/**
 * L-BFGS on a smooth objective, stopping as soon as ||grad|| <= eps (checked
 * before the first step, so an eps-stationary start returns with zero
 * iterations). Each step comes from a strong Wolfe line search capped by
 * `bound`. The initial inverse Hessian is scaled by <y,s>/<y,y> of the latest
 * pair. When a step satisfies only sufficient decrease, the curvature pairs
 * are discarded so the next direction is steepest descent.
 */
LbfgsResult minimize_lbfgs(const SmoothObjective& objective, const Vector& start, double eps,
                           const InnerConfig& config, const StepBound& bound = {});

/// Finds x with ||grad_x smoothing(x, t_fixed; lambda_bar, r)|| <= eps.
InnerResult minimize_x(const Problem& problem, double t_fixed, const DualState& dual,
                       const Vector& x_start, double eps, const InnerConfig& config);

/// Finds (x, t), t > 0, with ||grad barrier(x, t; lambda_bar, r, s)|| <= eps.
/// Line-search trials keep t >= (1 - kappa) * t_current. s = 0 is accepted
/// and gives the plain smoothing function; the run then stops with
/// line_search_failure once t would leave the normal double range.
InnerResult minimize_xt(const Problem& problem, const DualState& dual, double s,
                        const Vector& x_start, double t_start, double eps,
                        const InnerConfig& config);

/// Finds x with ||grad_x phr(x; lambda_bar, r)|| <= eps.
InnerResult minimize_phr(const Problem& problem, const DualState& dual, const Vector& x_start,
                         double eps, const InnerConfig& config);

}  // namespace sharpal
