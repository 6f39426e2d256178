#pragma once

#include "sharpal/problem.hpp"

namespace sharpal {

/// Real number or +infinity. The infinite state is an explicit flag so that
/// callers branch on it rather than on IEEE overflow or NaN propagation.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  /// Value when finite, +inf otherwise.
  double value() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Multiplier estimate and penalty parameter carried between outer iterations.
struct DualState {
  Vector lambda_bar;  // projected estimate used to build the subproblem
  Vector lambda_raw;  // estimate before projection
  double r = 1.0;

  DualState() = default;
  DualState(Vector lambda_bar, double r);
  DualState(Vector lambda_bar, Vector lambda_raw, double r);

  /// Throws std::invalid_argument unless r > 0 and lambda_bar lies in the box.
  void validate(double lambda_min, double lambda_max) const;
};

struct ValueGradient {
  double value = 0.0;
  Vector gradient;
};

/// Value and partial gradients of the smoothing function (or its barrier
/// variant) at (x, t). Gradients are meaningful only when gradients_valid,
/// which holds exactly when t > 0.
struct SmoothedEval {
  ExtendedReal value;
  Vector grad_x;
  double grad_t = 0.0;
  bool gradients_valid = false;
  double h_norm = 0.0;
};

/// Classical Lagrangian f + <lambda, h> and its x-gradient.
ValueGradient lagrangian(const Problem& problem, const Vector& x, const Vector& lambda);

/// PHR augmented Lagrangian  f + <lambda, h> + (r/2)||h||^2.
ValueGradient phr_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda,
                             double r);
ValueGradient phr_lagrangian(const PointEval& point, const Vector& lambda, double r);

/// Sharp augmented Lagrangian  f + <lambda, h> + r||h||. Nonsmooth on h = 0,
/// so only the value is provided.
double sharp_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda, double r);
double sharp_lagrangian(const PointEval& point, const Vector& lambda, double r);

/**
 * Smoothing of the sharp Lagrangian in the auxiliary variable t:
 *
 *   t > 0           : f + <lambda,h> + (r/2t)||h||^2 + (r/2) t
 *   t = 0, h(x) = 0 : f
 *   otherwise       : +infinity
 *
 * For t > 0: grad_x = grad f + J (lambda + (r/t) h),
 *            grad_t = (r/2)(1 - ||h||^2 / t^2).
 * Minimizing over t >= 0 recovers the sharp Lagrangian at t = ||h(x)||.
 */
SmoothedEval smoothing_eval(const Problem& problem, const Vector& x, double t,
                            const Vector& lambda, double r);
SmoothedEval smoothing_eval(const PointEval& point, double t, const Vector& lambda, double r);

/**
 * Smoothing function plus the inverse barrier (r/2t) s^2 on t > 0. The
 * x-gradient is unchanged; grad_t = (r/2)(1 - (||h||^2 + s^2) / t^2), so for
 * fixed x the minimizer in t is sqrt(||h||^2 + s^2). With s > 0 the value is
 * +infinity for every t <= 0; with s = 0 this is smoothing_eval.
 */
SmoothedEval barrier_eval(const Problem& problem, const Vector& x, double t,
                          const Vector& lambda, double r, double s);
SmoothedEval barrier_eval(const PointEval& point, double t, const Vector& lambda, double r,
                          double s);

/// Multiplier lambda + (r/t) h(x) implicit in grad_x of the smoothing function.
Vector effective_multiplier(const PointEval& point, double t, const Vector& lambda, double r);

/// Stopping quantity sqrt(||grad_x smoothing(x, t; lambda_bar, r)||^2 + ||h(x)||^2).
/// Throws std::invalid_argument for t <= 0.
double kkt_residual(const Problem& problem, const Vector& x, double t, const DualState& dual);
double kkt_residual(const PointEval& point, double t, const DualState& dual);

}  // namespace sharpal
