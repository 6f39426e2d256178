#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sharpal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Reference solution of a test problem. Some problems have several global
/// minimizers (504 has x* = +-1), so all of them are listed.
struct KnownSolution {
  std::vector<Vector> minimizers;
  std::optional<Vector> multiplier;
  double objective = 0.0;
};

/**
 * Equality constrained nonlinear program
 *
 *   minimize f(x)  subject to  h(x) = 0,   f : R^n -> R,  h : R^n -> R^m.
 *
 * Jacobian orientation: constraint_jacobian(x) is the n x m matrix whose
 * column i is grad h_i(x). With this convention the Lagrangian gradient is
 * written grad f(x) + J(x) * lambda, and J(x) * h(x) is the gradient of
 * 0.5 * ||h(x)||^2.
 *
 * A Problem is an immutable value; the callbacks must be pure so a single
 * instance can be shared by concurrent solver runs.
 */
class Problem {
 public:
  struct Callbacks {
    std::function<double(const Vector&)> objective;
    std::function<Vector(const Vector&)> objective_gradient;
    std::function<Vector(const Vector&)> constraints;
    std::function<Matrix(const Vector&)> constraint_jacobian;
  };

  Problem(std::string id, int n, int m, Callbacks callbacks, Vector start_point,
          std::optional<KnownSolution> known_solution = std::nullopt);

  const std::string& id() const { return id_; }
  int n() const { return n_; }
  int m() const { return m_; }
  const Vector& start_point() const { return start_point_; }
  const std::optional<KnownSolution>& known_solution() const { return known_solution_; }
  const Callbacks& callbacks() const { return callbacks_; }

  double objective(const Vector& x) const { return callbacks_.objective(x); }
  Vector objective_gradient(const Vector& x) const { return callbacks_.objective_gradient(x); }
  Vector constraints(const Vector& x) const { return callbacks_.constraints(x); }
  Matrix constraint_jacobian(const Vector& x) const { return callbacks_.constraint_jacobian(x); }

 private:
  std::string id_;
  int n_;
  int m_;
  Callbacks callbacks_;
  Vector start_point_;
  std::optional<KnownSolution> known_solution_;
};

/// Everything the Lagrangian family needs at one primal point. Computing this
/// once per x keeps constraint evaluations to one per call.
struct PointEval {
  double f = 0.0;
  Vector grad_f;
  Vector h;
  Matrix jacobian;
  double h_norm2 = 0.0;

  double h_norm() const;
};

PointEval evaluate_point(const Problem& problem, const Vector& x);

/// Clamp level M for the cutoff reformulation that makes f bounded below and
/// h bounded:
///
///   f~(x)   = exp(f(x))
///   h~_i(x) = max{ -M + tanh(h_i(x) + M), min{ h_i(x), M + tanh(h_i(x) - M) } }
///
/// h~_i coincides with h_i wherever |h_i(x)| <= M and |h~_i| < M + 1.
struct CutoffTransform {
  double bound_M = 10.0;
  bool enabled = true;
};

/// Scalar cutoff map and its derivative, exposed for testing.
double cutoff_value(double h, double M);
double cutoff_derivative(double h, double M);

/// Returns the cutoff-transformed problem (or a copy when disabled). The known
/// multiplier is rescaled by exp(f(x*)) since grad f~ = exp(f) grad f and the
/// constraint gradients are unchanged on the feasible set.
Problem apply_cutoff(const Problem& problem, const CutoffTransform& transform);

/// Deterministic sample of points uniformly distributed in the infinity-norm
/// ball of the given radius around the start point.
std::vector<Vector> random_probe_points(const Problem& problem, int count, double radius,
                                        std::uint64_t seed);

}  // namespace sharpal
