#include "sharpal/problem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace sharpal {

Problem::Problem(std::string id, int n, int m, Callbacks callbacks, Vector start_point,
                 std::optional<KnownSolution> known_solution)
    : id_(std::move(id)),
      n_(n),
      m_(m),
      callbacks_(std::move(callbacks)),
      start_point_(std::move(start_point)),
      known_solution_(std::move(known_solution)) {
  if (n_ <= 0 || m_ <= 0) {
    throw std::invalid_argument("problem " + id_ + ": dimensions must be positive");
  }
  if (!callbacks_.objective || !callbacks_.objective_gradient || !callbacks_.constraints ||
      !callbacks_.constraint_jacobian) {
    throw std::invalid_argument("problem " + id_ + ": all four callbacks are required");
  }
  if (start_point_.size() != n_) {
    throw std::invalid_argument("problem " + id_ + ": start point has wrong dimension");
  }
  if (known_solution_) {
    for (const auto& x : known_solution_->minimizers) {
      if (x.size() != n_) throw std::invalid_argument("problem " + id_ + ": bad solution size");
    }
    if (known_solution_->multiplier && known_solution_->multiplier->size() != m_) {
      throw std::invalid_argument("problem " + id_ + ": bad multiplier size");
    }
  }
}

double PointEval::h_norm() const { return std::sqrt(h_norm2); }

PointEval evaluate_point(const Problem& problem, const Vector& x) {
  PointEval e;
  e.f = problem.objective(x);
  e.grad_f = problem.objective_gradient(x);
  e.h = problem.constraints(x);
  e.jacobian = problem.constraint_jacobian(x);
  e.h_norm2 = e.h.squaredNorm();
  return e;
}

double cutoff_value(double h, double M) {
  const double upper = std::min(h, M + std::tanh(h - M));
  return std::max(-M + std::tanh(h + M), upper);
}

double cutoff_derivative(double h, double M) {
  // Same branch selection as cutoff_value; ties resolve to the branch whose
  // derivative agrees at the junction anyway.
  const double upper_tanh = M + std::tanh(h - M);
  double value;
  double slope;
  if (h <= upper_tanh) {
    value = h;
    slope = 1.0;
  } else {
    value = upper_tanh;
    const double th = std::tanh(h - M);
    slope = 1.0 - th * th;
  }
  const double lower = -M + std::tanh(h + M);
  if (lower > value) {
    const double th = std::tanh(h + M);
    slope = 1.0 - th * th;
  }
  return slope;
}

Problem apply_cutoff(const Problem& problem, const CutoffTransform& transform) {
  if (!transform.enabled) return problem;
  if (!(transform.bound_M > 0.0)) throw std::invalid_argument("cutoff bound M must be positive");
  const double M = transform.bound_M;
  const Problem::Callbacks base = problem.callbacks();

  Problem::Callbacks cb;
  cb.objective = [base](const Vector& x) { return std::exp(base.objective(x)); };
  cb.objective_gradient = [base](const Vector& x) -> Vector {
    return std::exp(base.objective(x)) * base.objective_gradient(x);
  };
  cb.constraints = [base, M](const Vector& x) -> Vector {
    return base.constraints(x).unaryExpr([M](double v) { return cutoff_value(v, M); });
  };
  cb.constraint_jacobian = [base, M](const Vector& x) -> Matrix {
    const Vector h = base.constraints(x);
    Matrix J = base.constraint_jacobian(x);
    for (Eigen::Index i = 0; i < J.cols(); ++i) J.col(i) *= cutoff_derivative(h(i), M);
    return J;
  };

  std::optional<KnownSolution> known = problem.known_solution();
  if (known) {
    const double scale = std::exp(known->objective);
    if (known->multiplier) *known->multiplier *= scale;
    known->objective = scale;
  }
  return Problem(problem.id(), problem.n(), problem.m(), std::move(cb), problem.start_point(),
                 std::move(known));
}

std::vector<Vector> random_probe_points(const Problem& problem, int count, double radius,
                                        std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("random_probe_points: count must be >= 1");
  if (radius < 0.0) throw std::invalid_argument("random_probe_points: radius must be >= 0");
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(count));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < count; ++k) {
    Vector x = problem.start_point();
    if (radius > 0.0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += radius * unit(rng);
    }
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace sharpal
