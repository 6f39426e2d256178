#include "sharpal/oracle.hpp"

#include "sharpal/errors.hpp"
#include "sharpal/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace sharpal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values straight from the definitions, independent of the evaluation layer.
double phr_value(const Problem& p, const Vector& x, const Vector& lambda, double r) {
  const Vector h = p.constraints(x);
  return p.objective(x) + lambda.dot(h) + 0.5 * r * h.squaredNorm();
}

double smoothing_value(const Problem& p, const Vector& x, double t, const Vector& lambda,
                       double r, double s) {
  const Vector h = p.constraints(x);
  if (t > 0.0) {
    return p.objective(x) + lambda.dot(h) + r / (2.0 * t) * h.squaredNorm() + 0.5 * r * t +
           r / (2.0 * t) * s * s;
  }
  if (t == 0.0 && s == 0.0 && h.squaredNorm() == 0.0) return p.objective(x);
  return kInf;
}

// Terms of smoothing_value that depend on t (t > 0). f and <lambda, h> are
// left out so their rounding does not swamp a difference quotient in t.
double t_terms(const Problem& p, const Vector& x, double t, double r, double s) {
  const double h2 = p.constraints(x).squaredNorm();
  return r / (2.0 * t) * (h2 + s * s) + 0.5 * r * t;
}

double sharp_value(const Problem& p, const Vector& x, const Vector& lambda, double r) {
  const Vector h = p.constraints(x);
  return p.objective(x) + lambda.dot(h) + r * h.norm();
}

double scalar_central_derivative(const std::function<double(double)>& fn, double v) {
  const double step = central_step(v);
  return (fn(v + step) - fn(v - step)) / (2.0 * step);
}

GridArgmin run_grid(const GridFunction& fn, const TensorGrid& grid, bool parallel) {
  return parallel ? grid_argmin_parallel(fn, grid) : grid_argmin_serial(fn, grid);
}

}  // namespace

double central_step(double v) { return 1e-6 * std::max(1.0, std::abs(v)); }

Vector central_gradient(const std::function<double(const Vector&)>& fn, const Vector& x) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = central_step(x(i));
    probe(i) = x(i) + step;
    const double up = fn(probe);
    probe(i) = x(i) - step;
    const double down = fn(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * step);
  }
  return g;
}

Matrix central_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x) {
  const Vector h0 = fn(x);
  Matrix J(x.size(), h0.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = central_step(x(i));
    probe(i) = x(i) + step;
    const Vector up = fn(probe);
    probe(i) = x(i) - step;
    const Vector down = fn(probe);
    probe(i) = x(i);
    J.row(i) = ((up - down) / (2.0 * step)).transpose();
  }
  return J;
}

double relative_error(const Vector& analytic, const Vector& numeric) {
  if (analytic.size() != numeric.size()) throw std::invalid_argument("size mismatch");
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

double GradientCheckReport::max_error() const {
  return std::max({objective, constraints, phr, smoothing_x, smoothing_t, barrier_x, barrier_t});
}

GradientCheckReport check_gradients(const Problem& problem, const std::vector<Vector>& points,
                                    std::uint64_t seed) {
  GradientCheckReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lambda_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> r_dist(1.0, 10.0);
  std::uniform_real_distribution<double> t_dist(0.1, 2.0);
  std::uniform_real_distribution<double> s_dist(0.1, 1.0);

  for (const Vector& x : points) {
    if (!x.allFinite()) throw std::invalid_argument("check_gradients: non-finite point");
    Vector lambda(problem.m());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = lambda_dist(rng);
    const double r = r_dist(rng);
    const double t = t_dist(rng);
    const double s = s_dist(rng);

    const auto f = [&](const Vector& z) { return problem.objective(z); };
    const auto h = [&](const Vector& z) { return problem.constraints(z); };
    report.objective = std::max(
        report.objective, relative_error(problem.objective_gradient(x), central_gradient(f, x)));
    const Matrix J = problem.constraint_jacobian(x);
    const Matrix Jfd = central_jacobian(h, x);
    report.constraints = std::max(
        report.constraints,
        relative_error(J.reshaped(), Jfd.reshaped()));

    const auto phr = [&](const Vector& z) { return phr_value(problem, z, lambda, r); };
    report.phr = std::max(report.phr, relative_error(phr_lagrangian(problem, x, lambda, r).gradient,
                                                     central_gradient(phr, x)));

    const SmoothedEval se = smoothing_eval(problem, x, t, lambda, r);
    const auto sx = [&](const Vector& z) { return smoothing_value(problem, z, t, lambda, r, 0.0); };
    const auto st = [&](double tt) { return t_terms(problem, x, tt, r, 0.0); };
    report.smoothing_x =
        std::max(report.smoothing_x, relative_error(se.grad_x, central_gradient(sx, x)));
    report.smoothing_t = std::max(
        report.smoothing_t, relative_error(Vector::Constant(1, se.grad_t),
                                           Vector::Constant(1, scalar_central_derivative(st, t))));

    const SmoothedEval be = barrier_eval(problem, x, t, lambda, r, s);
    const auto bx = [&](const Vector& z) { return smoothing_value(problem, z, t, lambda, r, s); };
    const auto bt = [&](double tt) { return t_terms(problem, x, tt, r, s); };
    report.barrier_x =
        std::max(report.barrier_x, relative_error(be.grad_x, central_gradient(bx, x)));
    report.barrier_t = std::max(
        report.barrier_t, relative_error(Vector::Constant(1, be.grad_t),
                                         Vector::Constant(1, scalar_central_derivative(bt, t))));
    ++report.points;
  }
  return report;
}

void GridSpec::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("grid bounds must have the same nonzero dimension");
  }
  if (!(lower.array() < upper.array()).all()) {
    throw std::invalid_argument("grid needs lower < upper on every axis");
  }
  if (points_per_axis < 3) throw std::invalid_argument("grid needs >= 3 points per axis");
  if (refinement_rounds < 0) throw std::invalid_argument("refinement_rounds must be >= 0");
  if (!(shrink > 1.0)) throw std::invalid_argument("grid shrink factor must be > 1");
}

GridSpec default_grid(const Problem& problem) {
  const double radius = std::max(2.0, 1.5 * problem.start_point().cwiseAbs().maxCoeff());
  GridSpec grid;
  grid.lower = Vector::Constant(problem.n(), -radius);
  grid.upper = Vector::Constant(problem.n(), radius);
  return grid;
}

OracleMinimum global_minimize_smoothing(const Problem& problem, const Vector& lambda, double r,
                                        const GridSpec& spec) {
  if (problem.n() > 3) {
    throw UnsupportedError("grid global minimization supports n <= 3 only");
  }
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  spec.validate();
  if (spec.lower.size() != problem.n()) throw std::invalid_argument("grid dimension mismatch");

  const GridFunction value = [&](const Vector& x) { return sharp_value(problem, x, lambda, r); };

  TensorGrid grid{spec.lower, spec.upper, spec.points_per_axis};
  OracleMinimum out;
  GridArgmin best = run_grid(value, grid, spec.parallel);
  out.round_values.push_back(best.value);
  for (int round = 0; round < spec.refinement_rounds; ++round) {
    const Vector half = 0.5 * (grid.upper - grid.lower) / spec.shrink;
    grid.lower = best.point - half;
    grid.upper = best.point + half;
    const GridArgmin candidate = run_grid(value, grid, spec.parallel);
    if (candidate.value < best.value) best = candidate;
    out.round_values.push_back(best.value);
  }

  out.x = best.point;
  out.t = problem.constraints(out.x).norm();
  out.value = best.value;
  out.resolution = grid.spacing();
  return out;
}

double dual_value(const Problem& problem, const Vector& lambda, double r, const GridSpec& grid) {
  return global_minimize_smoothing(problem, lambda, r, grid).value;
}

GlobalMinimizer make_global_minimizer(std::optional<GridSpec> grid) {
  return [grid](const Problem& problem, const Vector& lambda, double r) {
    const OracleMinimum m =
        global_minimize_smoothing(problem, lambda, r, grid ? *grid : default_grid(problem));
    return GlobalMinimum{m.x, m.t, m.value, m.resolution};
  };
}

TGridMinimum t_grid_minimize(const Problem& problem, const Vector& x, const Vector& lambda,
                             double r, double t_upper, int points, int rounds) {
  if (!(t_upper > 0.0) || points < 3) throw std::invalid_argument("bad t grid");
  double lo = 0.0;
  double hi = t_upper;
  double best_t = 0.0;
  double best_value = kInf;
  double spacing = 0.0;
  for (int round = 0; round <= rounds; ++round) {
    spacing = (hi - lo) / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double t = lo + spacing * j;
      const double v = smoothing_value(problem, x, t, lambda, r, 0.0);
      if (v < best_value) {
        best_value = v;
        best_t = t;
      }
    }
    // Near its minimum the t-profile has curvature about r / t, so values
    // rounded at eps |v| cannot place t more finely than this.
    const double floor = std::sqrt(2.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(1.0, std::abs(best_value)) *
                                   std::max(best_t, spacing) / r);
    if (4.0 * spacing / (points - 1) < floor) break;
    lo = std::max(0.0, best_t - 2.0 * spacing);
    hi = best_t + 2.0 * spacing;
  }
  return {best_t, spacing};
}

Example1Verdict example1_witness(double lambda, double r, double eps,
                                 const Example1Search& search) {
  if (!(r > std::abs(lambda))) {
    throw std::invalid_argument("example1_witness needs r > |lambda|");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("example1_witness needs eps > 0");
  Example1Verdict v;
  const double abs_l = std::abs(lambda);
  v.threshold_eps = std::sqrt(2.0 * r * r + 2.0 * abs_l * r) - (abs_l + r);
  const double shrink = 1.0 - 2.0 * eps / r;
  v.analytic_t_bound = shrink > 0.0 ? (eps + abs_l) / std::sqrt(shrink) - r
                                    : std::numeric_limits<double>::quiet_NaN();
  v.analytically_excluded = shrink > 0.0 && v.analytic_t_bound < 0.0;

  std::vector<double> xs(static_cast<std::size_t>(search.x_points));
  for (int i = 0; i < search.x_points; ++i) {
    xs[static_cast<std::size_t>(i)] =
        search.x_lo + (search.x_hi - search.x_lo) * i / (search.x_points - 1);
  }
  // Uniform nodes on (0, t_hi] plus log-spaced nodes reaching down to 1e-12.
  std::vector<double> ts;
  for (int j = 1; j <= search.t_points; ++j) ts.push_back(search.t_hi * j / search.t_points);
  const int log_points = search.t_points / 2;
  const double log_lo = -12.0;
  const double log_hi = std::log10(search.t_hi);
  for (int j = 0; j < log_points; ++j) {
    ts.push_back(std::pow(10.0, log_lo + (log_hi - log_lo) * j / (log_points - 1)));
  }
  std::sort(ts.begin(), ts.end());

  const PairFunction grad_norm = [lambda, r](double x, double t) {
    const double gx = x + lambda + (r / t) * x;
    const double gt = 0.5 * r * (1.0 - (x * x) / (t * t));
    return std::hypot(gx, gt);
  };
  const PairArgmin best = search.parallel ? pair_argmin_parallel(grad_norm, xs, ts)
                                          : pair_argmin_serial(grad_norm, xs, ts);
  v.min_grad_norm = best.value;
  v.argmin_x = best.a;
  v.argmin_t = best.b;
  v.witness_found = best.value <= eps;
  return v;
}

BarrierStationaryPoint example1_barrier_point(double lambda, double r, double s) {
  if (!(s > 0.0) || !(r > 0.0)) throw std::invalid_argument("need s > 0 and r > 0");
  const auto x_of = [lambda, r](double t) { return -lambda * t / (t + r); };
  const auto gap = [&](double t) {
    const double x = x_of(t);
    return t * t - x * x - s * s;
  };
  double lo = s;
  double hi = std::sqrt(s * s + lambda * lambda);
  if (gap(lo) >= 0.0) return {x_of(lo), lo};
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {x_of(t), t};
}

}  // namespace sharpal
