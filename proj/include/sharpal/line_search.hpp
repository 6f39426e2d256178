#pragma once

#include "sharpal/lagrangian.hpp"

#include <functional>
#include <optional>

namespace sharpal {

/// Smooth objective on R^d. Returns nullopt outside the objective's domain.
using SmoothObjective = std::function<std::optional<ValueGradient>(const Vector&)>;

struct LineSearchParams {
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_evaluations = 40;
};

enum class LineSearchOutcome {
  strong_wolfe,      // both conditions hold
  approximate_wolfe,  // value within rounding of phi(0), slope test passes
  sufficient_decrease,  // Armijo holds, curvature condition does not
  failed,            // no acceptable step found
};

struct LineSearchResult {
  LineSearchOutcome outcome = LineSearchOutcome::failed;
  double step = 0.0;
  Vector point;
  double value = 0.0;
  Vector gradient;
  int evaluations = 0;
  bool saw_non_finite = false;
};

/**
 * Line search along direction d from z for the strong Wolfe conditions
 *
 *   phi(a) <= phi(0) + c1 a phi'(0),   |phi'(a)| <= c2 |phi'(0)|,
 *
 * bracketing then zooming with safeguarded cubic interpolation. When a
 * trial value lies within rounding of phi(0) the slope decides instead:
 * c2 phi'(0) <= phi'(a) <= (2 delta - 1) phi'(0) with delta = 0.1. Trial steps
 * never exceed max_step. Non-finite trial values count as "too long".
 * Requires phi'(0) < 0.
 */
LineSearchResult strong_wolfe_search(const SmoothObjective& objective, const Vector& z,
                                     double value, const Vector& gradient,
                                     const Vector& direction, double initial_step,
                                     double max_step, const LineSearchParams& params);

}  // namespace sharpal
