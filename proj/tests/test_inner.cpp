#include "sharpal/inner.hpp"
#include "sharpal/line_search.hpp"
#include "sharpal/test_suite.hpp"

#include <doctest.h>

#include <cmath>

using namespace sharpal;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

SmoothObjective rosenbrock() {
  return [](const Vector& z) -> std::optional<ValueGradient> {
    const double a = z(1) - z(0) * z(0);
    const double b = 1.0 - z(0);
    ValueGradient vg;
    vg.value = 100.0 * a * a + b * b;
    vg.gradient.resize(2);
    vg.gradient << -400.0 * z(0) * a - 2.0 * b, 200.0 * a;
    return vg;
  };
}

}  // namespace

TEST_CASE("strong Wolfe search on a quadratic") {
  const SmoothObjective q = [](const Vector& z) -> std::optional<ValueGradient> {
    return ValueGradient{0.5 * z.squaredNorm(), z};
  };
  const Vector z = v1(4.0);
  const Vector g = z;
  const Vector d = -g;
  const LineSearchParams params;
  const LineSearchResult r = strong_wolfe_search(q, z, 8.0, g, d, 1.0, 1e300, params);
  CHECK(r.outcome == LineSearchOutcome::strong_wolfe);
  CHECK(r.value <= 8.0 + params.c1 * r.step * g.dot(d));
  CHECK(std::abs(r.gradient.dot(d)) <= params.c2 * std::abs(g.dot(d)));

  // A too-long first trial is brought back by zooming.
  const LineSearchResult far = strong_wolfe_search(q, z, 8.0, g, d, 50.0, 1e300, params);
  CHECK(far.outcome == LineSearchOutcome::strong_wolfe);
  CHECK(far.value < 8.0);

  // The cap is respected.
  const LineSearchResult capped = strong_wolfe_search(q, z, 8.0, g, d, 1.0, 0.25, params);
  CHECK(capped.step <= 0.25);
}

TEST_CASE("line search treats a domain exit as too long") {
  const SmoothObjective q = [](const Vector& z) -> std::optional<ValueGradient> {
    if (z(0) < 1.0) return std::nullopt;
    return ValueGradient{(z(0) - 2.0) * (z(0) - 2.0), v1(2.0 * (z(0) - 2.0))};
  };
  const Vector z = v1(5.0);
  const Vector g = v1(6.0);
  const LineSearchResult r = strong_wolfe_search(q, z, 9.0, g, -g, 1.0, 1e300, {});
  CHECK(r.outcome != LineSearchOutcome::failed);
  CHECK(r.point(0) >= 1.0);
  CHECK(r.value < 9.0);
}

TEST_CASE("L-BFGS minimises Rosenbrock with non-increasing values") {
  InnerConfig config;
  config.record_values = true;
  Vector start(2);
  start << -1.2, 1.0;
  const LbfgsResult r = minimize_lbfgs(rosenbrock(), start, 1e-10, config);
  CHECK(r.status == InnerStatus::converged);
  CHECK(r.z(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.z(1) == doctest::Approx(1.0).epsilon(1e-8));
  for (std::size_t i = 1; i < r.values.size(); ++i) CHECK(r.values[i] <= r.values[i - 1]);
}

TEST_CASE("L-BFGS iteration cap") {
  InnerConfig config;
  config.max_iterations = 3;
  Vector start(2);
  start << -1.2, 1.0;
  const LbfgsResult r = minimize_lbfgs(rosenbrock(), start, 1e-10, config);
  CHECK(r.status == InnerStatus::max_iterations);
  CHECK(r.iterations == 3);
}

TEST_CASE("inner config validation") {
  InnerConfig config;
  CHECK_NOTHROW(config.validate());
  config.c2 = 1e-5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = InnerConfig{};
  config.t_boundary_fraction = 1.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = InnerConfig{};
  config.memory = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("minimize_x on the strictly convex 503 subproblem") {
  const Problem p = get_problem(503);
  const InnerResult r = minimize_x(p, 1.0, DualState(v1(0.0), 1.0), p.start_point(), 1e-8, {});
  CHECK(r.converged);
  CHECK(r.grad_norm <= 1e-8);
  CHECK(r.x.norm() <= 1e-8);
  CHECK(r.iterations <= 2 * p.n() + 5);
  CHECK(r.t == 1.0);
}

TEST_CASE("minimize_x returns an eps-stationary start unchanged") {
  const Problem p = get_problem(502);
  const InnerResult r = minimize_x(p, 1.0, DualState(v1(0.0), 2.0), v1(0.0), 1e-8, {});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.x(0) == 0.0);
}

TEST_CASE("minimize_x with tiny fixed t still converges") {
  const Problem p = get_problem(502);
  const double t = 1e-6;
  const double lambda = 0.5;
  const double r = 2.0;
  const InnerResult res = minimize_x(p, t, DualState(v1(lambda), r), v1(3.0), 1e-9, {});
  CHECK(res.converged);
  CHECK(res.x(0) == doctest::Approx(-lambda * t / (t + r)).epsilon(1e-6));
}

TEST_CASE("minimize_x rejects t <= 0") {
  const Problem p = get_problem(502);
  CHECK_THROWS_AS(minimize_x(p, 0.0, DualState(v1(0.0), 2.0), v1(1.0), 1e-8, {}),
                  std::invalid_argument);
}

TEST_CASE("minimize_xt on 502 with s = 0.5") {
  const Problem p = get_problem(502);
  const InnerResult r = minimize_xt(p, DualState(v1(0.0), 2.0), 0.5, v1(0.0), 1.0, 1e-10, {});
  CHECK(r.converged);
  CHECK(std::abs(r.x(0)) <= 1e-10);
  CHECK(r.t == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.min_trial_t > 0.0);
}

TEST_CASE("minimize_xt without barrier finds no stationary point") {
  const Problem p = get_problem(502);
  const InnerResult r = minimize_xt(p, DualState(v1(0.0), 2.0), 0.0, v1(10.0), 1.0, 1e-4, {});
  CHECK_FALSE(r.converged);
  CHECK(r.t < 1e-100);
  CHECK(r.min_trial_t > 0.0);
}

TEST_CASE("minimize_xt finds stationary points with s > 0 on the suite") {
  for (int id : suite_ids()) {
    CAPTURE(id);
    const Problem p = apply_cutoff(get_problem(id), CutoffTransform{10.0, id == 513});
    const Vector lambda = Vector::Zero(p.m());
    const InnerResult r =
        minimize_xt(p, DualState(lambda, 10.0), 0.1, p.start_point(), 1.0, 1e-6, {});
    CHECK(r.converged);
    CHECK(r.t > 0.0);
    CHECK(r.min_trial_t > 0.0);
  }
}

TEST_CASE("minimize_xt rejects bad inputs") {
  const Problem p = get_problem(502);
  CHECK_THROWS_AS(minimize_xt(p, DualState(v1(0.0), 2.0), -0.1, v1(0.0), 1.0, 1e-8, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimize_xt(p, DualState(v1(0.0), 2.0), 0.1, v1(0.0), 0.0, 1e-8, {}),
                  std::invalid_argument);
}

TEST_CASE("minimize_phr on 506 with the optimal multiplier") {
  // Off the diagonal: from (10, 10) symmetry pins the iterates to x1 = x2.
  const Problem p = get_problem(506);
  Vector start(2);
  start << 2.0, -3.0;
  const InnerResult r = minimize_phr(p, DualState(v1(std::sqrt(0.5)), 10.0), start, 1e-10, {});
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-8));
  CHECK(r.x(1) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-8));
}

TEST_CASE("inner solves are deterministic") {
  const Problem p = get_problem(509);
  InnerConfig config;
  config.record_values = true;
  const DualState dual(Vector::Zero(1), 10.0);
  const InnerResult a = minimize_xt(p, dual, 0.1, p.start_point(), 1.0, 1e-8, config);
  const InnerResult b = minimize_xt(p, dual, 0.1, p.start_point(), 1.0, 1e-8, config);
  CHECK(a.values == b.values);
  CHECK(a.x == b.x);
  CHECK(a.t == b.t);
}
