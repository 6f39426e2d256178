#include "sharpal/inner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sharpal {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CurvaturePair {
  Vector s;
  Vector y;
  double rho;
};

// Two-loop recursion: returns -H g for the limited-memory inverse Hessian H.
Vector lbfgs_direction(const std::deque<CurvaturePair>& pairs, const Vector& g, double gamma) {
  Vector q = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  q *= gamma;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return -q;
}

bool finite(const ValueGradient& vg) { return std::isfinite(vg.value) && vg.gradient.allFinite(); }

}  // namespace

const char* to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::converged: return "converged";
    case InnerStatus::max_iterations: return "max_iterations";
    case InnerStatus::line_search_failure: return "line_search_failure";
    case InnerStatus::non_finite: return "non_finite";
  }
  return "unknown";
}

void InnerConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("inner max_iterations must be >= 1");
  if (memory < 1) throw std::invalid_argument("inner memory must be >= 1");
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw std::invalid_argument("line search requires 0 < c1 < c2 < 1");
  }
  if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
  if (!(0.0 < t_boundary_fraction && t_boundary_fraction < 1.0)) {
    throw std::invalid_argument("t_boundary_fraction must lie in (0, 1)");
  }
}

LbfgsResult minimize_lbfgs(const SmoothObjective& objective, const Vector& start, double eps,
                           const InnerConfig& config, const StepBound& bound) {
  config.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("inner tolerance eps must be positive");

  LbfgsResult out;
  out.z = start;
  const auto first = objective(start);
  if (!first || !finite(*first)) {
    out.status = InnerStatus::non_finite;
    out.diagnostic = "objective or gradient not finite at the start point";
    out.grad_norm = kInfinity;
    return out;
  }
  double value = first->value;
  Vector grad = first->gradient;
  if (config.record_values) out.values.push_back(value);

  const LineSearchParams ls_params{config.c1, config.c2, config.max_backtracks};
  std::deque<CurvaturePair> pairs;
  double gamma = 1.0;
  bool have_gamma = false;

  while (true) {
    const double gnorm = grad.norm();
    out.grad_norm = gnorm;
    if (gnorm <= eps) {
      out.status = InnerStatus::converged;
      break;
    }
    if (out.iterations >= config.max_iterations) {
      out.status = InnerStatus::max_iterations;
      break;
    }

    Vector direction;
    double initial_step = 1.0;
    if (!pairs.empty()) {
      direction = lbfgs_direction(pairs, grad, gamma);
      if (!(grad.dot(direction) < 0.0)) {
        pairs.clear();
      }
    }
    if (pairs.empty()) {
      if (have_gamma) {
        direction = -gamma * grad;
      } else {
        direction = -grad;
        initial_step = std::min(1.0, 1.0 / gnorm);
      }
    }

    const double max_step = bound ? bound(out.z, direction) : kInfinity;
    if (!(max_step > 0.0)) {
      out.status = InnerStatus::line_search_failure;
      out.diagnostic = "step bound leaves no room to move";
      break;
    }

    LineSearchResult ls = strong_wolfe_search(objective, out.z, value, grad, direction,
                                              initial_step, max_step, ls_params);
    if (ls.outcome == LineSearchOutcome::failed) {
      if (!pairs.empty() || have_gamma) {
        // Retry from a plain steepest-descent step before giving up.
        pairs.clear();
        have_gamma = false;
        continue;
      }
      out.status = ls.saw_non_finite ? InnerStatus::non_finite
                                     : InnerStatus::line_search_failure;
      out.diagnostic = ls.saw_non_finite
                           ? "line search met only non-finite values; last finite iterate kept"
                           : "line search could not find sufficient decrease";
      break;
    }

    Vector s = ls.point - out.z;
    Vector y = ls.gradient - grad;
    out.z = std::move(ls.point);
    value = ls.value;
    grad = std::move(ls.gradient);
    ++out.iterations;
    if (config.record_values) out.values.push_back(value);

    const double sy = s.dot(y);
    if (ls.outcome != LineSearchOutcome::sufficient_decrease && sy > 0.0 && std::isfinite(sy)) {
      const double yy = y.squaredNorm();
      gamma = sy / yy;
      have_gamma = true;
      pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(pairs.size()) > config.memory) pairs.pop_front();
    } else {
      pairs.clear();
    }
  }
  out.value = value;
  return out;
}

InnerResult minimize_x(const Problem& problem, double t_fixed, const DualState& dual,
                       const Vector& x_start, double eps, const InnerConfig& config) {
  if (!(t_fixed > 0.0)) throw std::invalid_argument("minimize_x requires t_fixed > 0");
  const SmoothObjective objective = [&](const Vector& x) -> std::optional<ValueGradient> {
    const SmoothedEval e = smoothing_eval(evaluate_point(problem, x), t_fixed, dual.lambda_bar,
                                          dual.r);
    return ValueGradient{e.value.value(), e.grad_x};
  };
  LbfgsResult r = minimize_lbfgs(objective, x_start, eps, config);
  InnerResult out;
  out.x = std::move(r.z);
  out.t = t_fixed;
  out.value = r.value;
  out.grad_norm = r.grad_norm;
  out.iterations = r.iterations;
  out.status = r.status;
  out.converged = r.status == InnerStatus::converged;
  out.diagnostic = std::move(r.diagnostic);
  out.min_trial_t = t_fixed;
  out.values = std::move(r.values);
  return out;
}

InnerResult minimize_xt(const Problem& problem, const DualState& dual, double s,
                        const Vector& x_start, double t_start, double eps,
                        const InnerConfig& config) {
  if (!(s >= 0.0)) throw std::invalid_argument("minimize_xt requires s >= 0");
  if (!(t_start > 0.0)) throw std::invalid_argument("minimize_xt requires t_start > 0");
  const Eigen::Index n = x_start.size();
  double min_t = t_start;

  const SmoothObjective objective = [&](const Vector& z) -> std::optional<ValueGradient> {
    const double t = z(n);
    if (!(t > 0.0)) throw std::logic_error("minimize_xt evaluated the barrier at t <= 0");
    min_t = std::min(min_t, t);
    const SmoothedEval e = barrier_eval(evaluate_point(problem, z.head(n)), t, dual.lambda_bar,
                                        dual.r, s);
    ValueGradient vg;
    vg.value = e.value.value();
    vg.gradient.resize(n + 1);
    vg.gradient.head(n) = e.grad_x;
    vg.gradient(n) = e.grad_t;
    return vg;
  };
  const double kappa = config.t_boundary_fraction;
  const StepBound bound = [n, kappa](const Vector& z, const Vector& d) {
    if (d(n) >= 0.0) return kInfinity;
    if ((1.0 - kappa) * z(n) < std::numeric_limits<double>::min()) return 0.0;
    return kappa * z(n) / (-d(n));
  };

  Vector z(n + 1);
  z.head(n) = x_start;
  z(n) = t_start;
  LbfgsResult r = minimize_lbfgs(objective, z, eps, config, bound);
  InnerResult out;
  out.x = r.z.head(n);
  out.t = r.z(n);
  out.value = r.value;
  out.grad_norm = r.grad_norm;
  out.iterations = r.iterations;
  out.status = r.status;
  out.converged = r.status == InnerStatus::converged;
  out.diagnostic = std::move(r.diagnostic);
  out.min_trial_t = min_t;
  out.values = std::move(r.values);
  return out;
}

InnerResult minimize_phr(const Problem& problem, const DualState& dual, const Vector& x_start,
                         double eps, const InnerConfig& config) {
  const SmoothObjective objective = [&](const Vector& x) -> std::optional<ValueGradient> {
    return phr_lagrangian(evaluate_point(problem, x), dual.lambda_bar, dual.r);
  };
  LbfgsResult r = minimize_lbfgs(objective, x_start, eps, config);
  InnerResult out;
  out.x = std::move(r.z);
  out.value = r.value;
  out.grad_norm = r.grad_norm;
  out.iterations = r.iterations;
  out.status = r.status;
  out.converged = r.status == InnerStatus::converged;
  out.diagnostic = std::move(r.diagnostic);
  out.values = std::move(r.values);
  return out;
}

}  // namespace sharpal
