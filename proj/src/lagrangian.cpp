#include "sharpal/lagrangian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sharpal {

namespace {

void require_positive_r(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("penalty parameter r must be positive");
}

void require_lambda_size(const PointEval& point, const Vector& lambda) {
  if (lambda.size() != point.h.size()) {
    throw std::invalid_argument("multiplier dimension does not match constraint count");
  }
}

}  // namespace

double ExtendedReal::value() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

DualState::DualState(Vector lambda_bar_, double r_)
    : lambda_bar(lambda_bar_), lambda_raw(std::move(lambda_bar_)), r(r_) {
  require_positive_r(r);
}

DualState::DualState(Vector lambda_bar_, Vector lambda_raw_, double r_)
    : lambda_bar(std::move(lambda_bar_)), lambda_raw(std::move(lambda_raw_)), r(r_) {
  require_positive_r(r);
}

void DualState::validate(double lambda_min, double lambda_max) const {
  require_positive_r(r);
  for (Eigen::Index i = 0; i < lambda_bar.size(); ++i) {
    if (!(lambda_bar(i) >= lambda_min && lambda_bar(i) <= lambda_max)) {
      throw std::invalid_argument("projected multiplier outside [lambda_min, lambda_max]");
    }
  }
}

ValueGradient lagrangian(const Problem& problem, const Vector& x, const Vector& lambda) {
  const PointEval p = evaluate_point(problem, x);
  require_lambda_size(p, lambda);
  return {p.f + lambda.dot(p.h), p.grad_f + p.jacobian * lambda};
}

ValueGradient phr_lagrangian(const PointEval& p, const Vector& lambda, double r) {
  require_positive_r(r);
  require_lambda_size(p, lambda);
  ValueGradient out;
  out.value = p.f + lambda.dot(p.h) + 0.5 * r * p.h_norm2;
  out.gradient = p.grad_f + p.jacobian * (lambda + r * p.h);
  return out;
}

ValueGradient phr_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda,
                             double r) {
  return phr_lagrangian(evaluate_point(problem, x), lambda, r);
}

double sharp_lagrangian(const PointEval& p, const Vector& lambda, double r) {
  require_positive_r(r);
  require_lambda_size(p, lambda);
  return p.f + lambda.dot(p.h) + r * p.h_norm();
}

double sharp_lagrangian(const Problem& problem, const Vector& x, const Vector& lambda, double r) {
  return sharp_lagrangian(evaluate_point(problem, x), lambda, r);
}

SmoothedEval smoothing_eval(const PointEval& p, double t, const Vector& lambda, double r) {
  return barrier_eval(p, t, lambda, r, 0.0);
}

SmoothedEval smoothing_eval(const Problem& problem, const Vector& x, double t,
                            const Vector& lambda, double r) {
  return smoothing_eval(evaluate_point(problem, x), t, lambda, r);
}

SmoothedEval barrier_eval(const PointEval& p, double t, const Vector& lambda, double r,
                          double s) {
  require_positive_r(r);
  require_lambda_size(p, lambda);
  if (s < 0.0) throw std::invalid_argument("barrier parameter s must be nonnegative");

  SmoothedEval out;
  out.h_norm = p.h_norm();
  if (t > 0.0) {
    const double s2 = s * s;
    out.value = ExtendedReal(p.f + lambda.dot(p.h) + (r / (2.0 * t)) * (p.h_norm2 + s2) +
                             0.5 * r * t);
    out.grad_x = p.grad_f + p.jacobian * (lambda + (r / t) * p.h);
    out.grad_t = 0.5 * r * (1.0 - (p.h_norm2 + s2) / (t * t));
    out.gradients_valid = true;
    return out;
  }
  // t = 0 is in the domain only for feasible x and no barrier.
  if (t == 0.0 && s == 0.0 && p.h_norm2 == 0.0) {
    out.value = ExtendedReal(p.f);
  } else {
    out.value = ExtendedReal::infinity();
  }
  return out;
}

SmoothedEval barrier_eval(const Problem& problem, const Vector& x, double t,
                          const Vector& lambda, double r, double s) {
  return barrier_eval(evaluate_point(problem, x), t, lambda, r, s);
}

Vector effective_multiplier(const PointEval& p, double t, const Vector& lambda, double r) {
  if (!(t > 0.0)) throw std::invalid_argument("effective_multiplier requires t > 0");
  return lambda + (r / t) * p.h;
}

double kkt_residual(const PointEval& p, double t, const DualState& dual) {
  if (!(t > 0.0)) throw std::invalid_argument("kkt_residual requires t > 0");
  const SmoothedEval e = smoothing_eval(p, t, dual.lambda_bar, dual.r);
  return std::sqrt(e.grad_x.squaredNorm() + p.h_norm2);
}

double kkt_residual(const Problem& problem, const Vector& x, double t, const DualState& dual) {
  return kkt_residual(evaluate_point(problem, x), t, dual);
}

}  // namespace sharpal
