#pragma once

#include "sharpal/grid_kernels.hpp"
#include "sharpal/outer.hpp"
#include "sharpal/problem.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sharpal {

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Central-difference step for coordinate value v: 1e-6 * max(1, |v|).
double central_step(double v);

Vector central_gradient(const std::function<double(const Vector&)>& fn, const Vector& x);

/// n x m Jacobian (column i approximates grad h_i), matching Problem.
Matrix central_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x);

/// max_i |a_i - b_i| / max(1, max_i |a_i|).
double relative_error(const Vector& analytic, const Vector& numeric);

// ---------------------------------------------------------------------------
// Gradient checks
// ---------------------------------------------------------------------------

struct GradientCheckReport {
  double objective = 0.0;
  double constraints = 0.0;
  double phr = 0.0;
  double smoothing_x = 0.0;
  double smoothing_t = 0.0;
  double barrier_x = 0.0;
  double barrier_t = 0.0;
  int points = 0;

  double max_error() const;
};

/// Compares analytic gradients of f, h, the PHR Lagrangian, the smoothing
/// function and its barrier variant against central differences at each
/// point. Multipliers, penalties, t in [0.1, 2] and s come from `seed`.
GradientCheckReport check_gradients(const Problem& problem, const std::vector<Vector>& points,
                                    std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Desk-scale global minimization of the smoothing function
// ---------------------------------------------------------------------------

/// Box grid with refinement: each round re-centres a box `shrink` times
/// smaller on the incumbent.
struct GridSpec {
  Vector lower;
  Vector upper;
  int points_per_axis = 201;
  int refinement_rounds = 8;
  double shrink = 4.0;
  bool parallel = true;

  void validate() const;
};

/// Box [-R, R]^n with R = max(2, 1.5 ||x0||_inf), so the bundled problems'
/// solutions and start points are inside.
GridSpec default_grid(const Problem& problem);

struct OracleMinimum {
  Vector x;
  double t = 0.0;
  double value = 0.0;
  double resolution = 0.0;
  std::vector<double> round_values;  // incumbent value after each round
};

/**
 * Incumbent global minimizer of the smoothing function over (x, t >= 0) for
 * n <= 3. For each x the optimal t is ||h(x)|| in closed form, so only x is
 * gridded and the value is the sharp Lagrangian. Throws UnsupportedError for
 * n > 3.
 */
OracleMinimum global_minimize_smoothing(const Problem& problem, const Vector& lambda, double r,
                                        const GridSpec& grid);

/// Grid estimate of the augmented dual function at (lambda, r).
double dual_value(const Problem& problem, const Vector& lambda, double r, const GridSpec& grid);

/// Adapter for solve_exact; uses default_grid(problem) when `grid` is empty.
GlobalMinimizer make_global_minimizer(std::optional<GridSpec> grid = std::nullopt);

struct TGridMinimum {
  double t = 0.0;
  double resolution = 0.0;
};

/// Cross-check of the closed-form t: minimizes t -> smoothing(x, t) over a
/// refined grid on [0, t_upper] with the value computed from its definition.
/// Refinement stops once the spacing drops below what rounded values resolve.
TGridMinimum t_grid_minimize(const Problem& problem, const Vector& x, const Vector& lambda,
                             double r, double t_upper, int points = 201, int rounds = 4);

// ---------------------------------------------------------------------------
// Nonexistence of inexact stationary points without a barrier
// ---------------------------------------------------------------------------

/**
 * Search for eps-stationary points of the smoothing function of
 *   min 0.5 x^2  s.t.  x = 0
 * over x in [x_lo, x_hi], t in (0, t_hi]. Gradients come from the closed form
 *   d/dx = x + lambda + (r/t) x,   d/dt = (r/2)(1 - x^2/t^2).
 * For r > |lambda| an eps-stationary point would need
 *   t <= (eps + |lambda|) / sqrt(1 - 2 eps / r) - r,
 * which is negative for eps below
 *   threshold = sqrt(2 r^2 + 2 |lambda| r) - (|lambda| + r).
 */
struct Example1Verdict {
  double min_grad_norm = 0.0;
  double argmin_x = 0.0;
  double argmin_t = 0.0;
  double threshold_eps = 0.0;
  double analytic_t_bound = 0.0;  // NaN when 1 - 2 eps / r <= 0
  bool analytically_excluded = false;
  bool witness_found = false;
};

struct Example1Search {
  double x_lo = -5.0;
  double x_hi = 5.0;
  double t_hi = 10.0;
  int x_points = 2001;
  int t_points = 2000;
  bool parallel = true;
};

Example1Verdict example1_witness(double lambda, double r, double eps,
                                 const Example1Search& search = {});

/// Stationary point of the barrier variant for the same toy problem, from
/// x = -lambda t / (t + r) and t = sqrt(x^2 + s^2), solved by bisection in t.
struct BarrierStationaryPoint {
  double x = 0.0;
  double t = 0.0;
};
BarrierStationaryPoint example1_barrier_point(double lambda, double r, double s);

}  // namespace sharpal
