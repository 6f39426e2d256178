#include "sharpal/outer.hpp"

#include "sharpal/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sharpal {

void SolverConfig::validate() const {
  if (!(lambda_min < lambda_max)) throw std::invalid_argument("need lambda_min < lambda_max");
  if (!(0.0 < tau && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must be > 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be > 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be > 0");
  if (max_outer < 0) throw std::invalid_argument("max_outer must be >= 0");
  if (!(r_max >= r0)) throw std::invalid_argument("r_max must be >= r0");
  if (!(s_floor > 0.0)) throw std::invalid_argument("s_floor must be > 0");
  inner.validate();
}

Driver parse_driver(const std::string& name) {
  if (name == "alg2") return Driver::alg2;
  if (name == "alg3") return Driver::alg3;
  if (name == "phr") return Driver::phr;
  if (name == "exact") return Driver::exact;
  throw NotFoundError("unknown driver '" + name + "' (expected alg2|alg3|phr|exact)");
}

const char* to_string(Driver driver) {
  switch (driver) {
    case Driver::alg2: return "alg2";
    case Driver::alg3: return "alg3";
    case Driver::phr: return "phr";
    case Driver::exact: return "exact";
  }
  return "unknown";
}

Vector update_multiplier(const Vector& lambda_bar, double r, const Vector& h, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("update_multiplier requires t > 0");
  return lambda_bar + (r / t) * h;
}

Vector project_multiplier(const Vector& lambda, double lambda_min, double lambda_max) {
  if (!(lambda_min < lambda_max)) throw std::invalid_argument("need lambda_min < lambda_max");
  return lambda.cwiseMax(lambda_min).cwiseMin(lambda_max);
}

double next_penalty(double r, double h_norm_new, double h_norm_old, double tau, double gamma) {
  return h_norm_new <= tau * h_norm_old ? r : gamma * r;
}

double fixed_smoothing_t(double h_norm, double s) { return std::sqrt(h_norm * h_norm + s * s); }

namespace {

DualState initial_dual(const Problem& problem, const SolverConfig& config) {
  const Vector lambda0 = Vector::Zero(problem.m());
  return DualState(project_multiplier(lambda0, config.lambda_min, config.lambda_max), lambda0,
                   config.r0);
}

double phr_residual(const PointEval& p, const Vector& lambda) {
  return std::sqrt((p.grad_f + p.jacobian * lambda).squaredNorm() + p.h_norm2);
}

// Multiplier minimizing ||grad f + J mu||; used where the driver carries no
// smooth multiplier estimate.
Vector least_squares_multiplier(const PointEval& p) {
  return p.jacobian.colPivHouseholderQr().solve(-p.grad_f);
}

void finish_report(SolveReport& report, const PointEval& p, const Vector& x) {
  report.x = x;
  report.f = p.f;
  report.infeasibility = p.h_norm();
}

// Shared loop of the two smoothed drivers; they differ only in how Step 2
// produces (x^{k+1}, t_{k+1}).
SolveReport run_smoothed(const Problem& problem, const SolverConfig& config, Driver driver) {
  config.validate();
  SolveReport report;
  report.problem_id = problem.id();
  report.driver = driver;

  Vector x = problem.start_point();
  double t = config.t0;
  DualState dual = initial_dual(problem, config);
  PointEval point = evaluate_point(problem, x);
  double residual = kkt_residual(point, t, dual);
  Schedule schedule(config.tol, config.eps_rule, config.s_rule, config.s_floor);

  for (int k = 0;; ++k) {
    if (residual <= config.tol) {
      report.inform = 0;
      break;
    }
    if (k >= config.max_outer) {
      report.inform = 1;
      report.annotation = kMaxIterations;
      break;
    }

    OuterIteration it;
    it.k = k;
    it.r = dual.r;
    it.h_norm_prev = point.h_norm();
    const ScheduleStep step = schedule.next(k, it.h_norm_prev);
    it.eps = step.eps;
    it.s = step.s;

    InnerResult inner;
    double t_next;
    if (driver == Driver::alg2) {
      t_next = fixed_smoothing_t(it.h_norm_prev, step.s);
      inner = minimize_x(problem, t_next, dual, x, step.eps, config.inner);
    } else {
      inner = minimize_xt(problem, dual, step.s, x, t, step.eps, config.inner);
      t_next = inner.t;
    }
    it.inner_iterations = inner.iterations;
    it.inner_grad_norm = inner.grad_norm;
    it.inner_status = inner.status;
    report.inner_iterations += inner.iterations;

    x = std::move(inner.x);
    t = t_next;
    point = evaluate_point(problem, x);
    it.x = x;
    it.t = t;
    it.h_norm = point.h_norm();
    it.lambda = update_multiplier(dual.lambda_bar, dual.r, point.h, t);
    it.r_next = next_penalty(dual.r, it.h_norm, it.h_norm_prev, config.tau, config.gamma);
    it.lambda_bar = project_multiplier(it.lambda, config.lambda_min, config.lambda_max);

    const bool capped = it.r_next > config.r_max;
    if (!capped) {
      dual = DualState(it.lambda_bar, it.lambda, it.r_next);
      residual = kkt_residual(point, t, dual);
    } else {
      // Keep the last admissible penalty; the run ends here.
      dual = DualState(it.lambda_bar, it.lambda, dual.r);
      residual = kkt_residual(point, t, dual);
    }
    it.kkt_residual = residual;
    report.trace.push_back(std::move(it));
    report.outer_iterations = k + 1;

    if (capped) {
      report.inform = 1;
      report.annotation = kPenaltyTooLarge;
      break;
    }
  }

  finish_report(report, point, x);
  report.lambda = dual.lambda_raw;
  report.lambda_effective = effective_multiplier(point, t, dual.lambda_bar, dual.r);
  report.t = t;
  report.r = dual.r;
  report.kkt_residual = residual;
  return report;
}

}  // namespace

SolveReport solve_alg2(const Problem& problem, const SolverConfig& config) {
  return run_smoothed(problem, config, Driver::alg2);
}

SolveReport solve_alg3(const Problem& problem, const SolverConfig& config) {
  return run_smoothed(problem, config, Driver::alg3);
}

SolveReport solve_phr(const Problem& problem, const SolverConfig& config) {
  config.validate();
  SolveReport report;
  report.problem_id = problem.id();
  report.driver = Driver::phr;

  Vector x = problem.start_point();
  DualState dual = initial_dual(problem, config);
  Vector lambda = dual.lambda_raw;
  PointEval point = evaluate_point(problem, x);
  double residual = phr_residual(point, lambda);
  Schedule schedule(config.tol, config.eps_rule, config.s_rule, config.s_floor);

  for (int k = 0;; ++k) {
    if (residual <= config.tol) {
      report.inform = 0;
      break;
    }
    if (k >= config.max_outer) {
      report.inform = 1;
      report.annotation = kMaxIterations;
      break;
    }

    OuterIteration it;
    it.k = k;
    it.r = dual.r;
    it.h_norm_prev = point.h_norm();
    const ScheduleStep step = schedule.next(k, it.h_norm_prev);
    it.eps = step.eps;
    it.s = step.s;

    InnerResult inner = minimize_phr(problem, dual, x, step.eps, config.inner);
    it.inner_iterations = inner.iterations;
    it.inner_grad_norm = inner.grad_norm;
    it.inner_status = inner.status;
    report.inner_iterations += inner.iterations;

    x = std::move(inner.x);
    point = evaluate_point(problem, x);
    it.x = x;
    it.t = 1.0;
    it.h_norm = point.h_norm();
    lambda = update_multiplier(dual.lambda_bar, dual.r, point.h, 1.0);
    it.lambda = lambda;
    it.r_next = next_penalty(dual.r, it.h_norm, it.h_norm_prev, config.tau, config.gamma);
    it.lambda_bar = project_multiplier(lambda, config.lambda_min, config.lambda_max);
    const bool capped = it.r_next > config.r_max;
    dual = DualState(it.lambda_bar, lambda, capped ? dual.r : it.r_next);
    residual = phr_residual(point, lambda);
    it.kkt_residual = residual;
    report.trace.push_back(std::move(it));
    report.outer_iterations = k + 1;

    if (capped) {
      report.inform = 1;
      report.annotation = kPenaltyTooLarge;
      break;
    }
  }

  finish_report(report, point, x);
  report.lambda = lambda;
  report.lambda_effective = lambda;
  report.t = 1.0;
  report.r = dual.r;
  report.kkt_residual = residual;
  return report;
}

SolveReport solve_exact(const Problem& problem, const SolverConfig& config,
                        const GlobalMinimizer& global_minimizer) {
  config.validate();
  if (problem.n() > 3) {
    throw UnsupportedError("exact driver needs global minimization; only n <= 3 is supported");
  }
  if (!global_minimizer) throw std::invalid_argument("exact driver needs a global minimizer");

  SolveReport report;
  report.problem_id = problem.id();
  report.driver = Driver::exact;

  Vector lambda = Vector::Zero(problem.m());
  double r = config.r0;
  Vector x = problem.start_point();
  double t = config.t0;
  report.inform = 1;
  report.annotation = kMaxIterations;

  for (int k = 0; k < config.max_outer; ++k) {
    const GlobalMinimum gm = global_minimizer(problem, lambda, r);
    const PointEval point = evaluate_point(problem, gm.x);
    OuterIteration it;
    it.k = k;
    it.x = gm.x;
    it.t = gm.t;
    it.r = r;
    it.h_norm_prev = k == 0 ? evaluate_point(problem, x).h_norm() : report.trace.back().h_norm;
    it.h_norm = point.h_norm();
    it.kkt_residual = phr_residual(point, least_squares_multiplier(point));
    x = gm.x;
    t = gm.t;
    report.outer_iterations = k + 1;

    if (gm.t <= 10.0 * gm.resolution) {
      it.lambda = lambda;
      it.lambda_bar = lambda;
      it.r_next = r;
      report.trace.push_back(std::move(it));
      report.inform = 0;
      report.annotation.clear();
      break;
    }
    lambda = update_multiplier(lambda, r, point.h, gm.t);
    r *= 2.0;
    it.lambda = lambda;
    it.lambda_bar = lambda;
    it.r_next = r;
    report.trace.push_back(std::move(it));
  }

  const PointEval point = evaluate_point(problem, x);
  finish_report(report, point, x);
  report.lambda = lambda;
  // The multiplier at a terminal point is lambda + r xi for some ||xi|| <= 1;
  // report the least-squares one.
  report.lambda_effective = least_squares_multiplier(point);
  report.kkt_residual = phr_residual(point, report.lambda_effective);
  report.t = t;
  report.r = r;
  return report;
}

SolveReport solve(const Problem& problem, Driver driver, const SolverConfig& config,
                  const GlobalMinimizer& global_minimizer) {
  switch (driver) {
    case Driver::alg2: return solve_alg2(problem, config);
    case Driver::alg3: return solve_alg3(problem, config);
    case Driver::phr: return solve_phr(problem, config);
    case Driver::exact: return solve_exact(problem, config, global_minimizer);
  }
  throw std::invalid_argument("unknown driver");
}

}  // namespace sharpal
