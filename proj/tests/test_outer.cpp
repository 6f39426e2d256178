#include "sharpal/errors.hpp"
#include "sharpal/oracle.hpp"
#include "sharpal/outer.hpp"
#include "sharpal/runner.hpp"
#include "sharpal/test_suite.hpp"

#include <doctest.h>

#include <cmath>

using namespace sharpal;

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.tau = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.gamma = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.lambda_min = 1.0;
  c.lambda_max = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.r0 = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("driver names") {
  CHECK(parse_driver("alg2") == Driver::alg2);
  CHECK(parse_driver("alg3") == Driver::alg3);
  CHECK(parse_driver("phr") == Driver::phr);
  CHECK(parse_driver("exact") == Driver::exact);
  CHECK_THROWS_AS(parse_driver("newton"), NotFoundError);
}

TEST_CASE("alg2 on 502") {
  const SolveReport r = solve_alg2(get_problem(502), SolverConfig{});
  CHECK(r.inform == 0);
  CHECK(std::abs(r.x(0)) <= 1e-6);
  CHECK(std::abs(r.f) <= 1e-10);
  CHECK(r.kkt_residual <= 1e-8);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.front().r == 10.0);
}

TEST_CASE("alg2 on 514 recovers the multiplier") {
  const SolveReport r = solve_alg2(get_problem(514), SolverConfig{});
  CHECK(r.inform == 0);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(r.x(1)) <= 1e-6);
  CHECK(r.f == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.lambda_effective(0) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("alg2 smoothing parameter follows sqrt(||h||^2 + s^2)") {
  const SolveReport r = solve_alg2(get_problem(506), SolverConfig{});
  for (const OuterIteration& it : r.trace) {
    CHECK(it.t == doctest::Approx(fixed_smoothing_t(it.h_norm_prev, it.s)).epsilon(1e-14));
  }
}

TEST_CASE("alg3 on 506 and 512") {
  const SolveReport r506 = solve_alg3(get_problem(506), SolverConfig{});
  CHECK(r506.inform == 0);
  CHECK(r506.x(0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-6));
  CHECK(r506.x(1) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-6));
  CHECK(r506.f == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-6));
  CHECK(ratio_bound_violations(r506.trace) == 0);

  const SolveReport r512 = solve_alg3(get_problem(512), SolverConfig{});
  CHECK(r512.inform == 0);
}

TEST_CASE("phr on 503 and 510") {
  const SolveReport r503 = solve_phr(get_problem(503), SolverConfig{});
  CHECK(r503.inform == 0);
  CHECK(r503.x.norm() <= 1e-6);
  CHECK(std::abs(r503.lambda(0)) <= 1e-6);

  const SolveReport r510 = solve_phr(get_problem(510), SolverConfig{});
  CHECK(r510.inform == 0);
  Vector xs(3);
  xs << -2.0, -3.0, -1.0;
  xs /= std::sqrt(14.0);
  CHECK((r510.x - xs).norm() <= 1e-6);
  CHECK(r510.lambda(0) == doctest::Approx(std::sqrt(14.0) / 2.0).epsilon(1e-5));
}

TEST_CASE("outer traces obey the update rules") {
  const SolverConfig config;
  for (Driver d : {Driver::alg2, Driver::alg3, Driver::phr}) {
    for (int id : {502, 505, 509, 511}) {
      CAPTURE(id);
      const SolveReport r = solve(get_problem(id), d, config);
      CHECK(penalty_rule_violations(r.trace, config.tau, config.gamma) == 0);
      for (const OuterIteration& it : r.trace) {
        CHECK(it.lambda_bar == project_multiplier(it.lambda, config.lambda_min, config.lambda_max));
        CHECK(it.eps >= config.tol / 10.0);
        CHECK(it.s >= config.s_floor);
      }
      for (std::size_t k = 1; k < r.trace.size(); ++k) {
        CHECK(r.trace[k].eps <= r.trace[k - 1].eps);
        CHECK(r.trace[k].h_norm_prev == r.trace[k - 1].h_norm);
      }
    }
  }
}

TEST_CASE("multiplier update of the first iteration") {
  const SolveReport r = solve_alg2(get_problem(502), SolverConfig{});
  const OuterIteration& it = r.trace.front();
  const Problem p = get_problem(502);
  const Vector expected = update_multiplier(Vector::Zero(1), it.r, p.constraints(it.x), it.t);
  CHECK(it.lambda(0) == doctest::Approx(expected(0)));
}

TEST_CASE("iteration budget gives inform 1") {
  SolverConfig config;
  config.max_outer = 1;
  const SolveReport r = solve_alg2(get_problem(509), config);
  CHECK(r.inform == 1);
  CHECK(r.annotation == kMaxIterations);
}

TEST_CASE("penalty cap gives inform 1") {
  SolverConfig config;
  config.r_max = 50.0;
  const SolveReport r = solve_alg3(get_problem(511), config);
  CHECK(r.inform == 1);
  CHECK(r.annotation == kPenaltyTooLarge);
}

TEST_CASE("511 is reported unsolved by the inexact drivers") {
  CHECK(solve_alg2(get_problem(511), SolverConfig{}).inform == 1);
}

TEST_CASE("exact driver") {
  const GlobalMinimizer gm = make_global_minimizer();
  const SolveReport r502 = solve_exact(get_problem(502), SolverConfig{}, gm);
  CHECK(r502.inform == 0);
  CHECK(std::abs(r502.x(0)) <= 1e-3);

  SolverConfig small;
  small.r0 = 0.1;
  const SolveReport r514 = solve_exact(get_problem(514), small, gm);
  CHECK(r514.inform == 0);
  REQUIRE(r514.trace.size() >= 2);
  CHECK(r514.trace[0].r_next == doctest::Approx(0.2));
  for (std::size_t k = 0; k + 1 < r514.trace.size(); ++k) {
    CHECK(r514.trace[k].r_next == 2.0 * r514.trace[k].r);
  }
  CHECK(std::abs(r514.x(0) - 1.0) <= 1e-3);

  CHECK_THROWS_AS(solve_exact(get_problem(505), SolverConfig{},
                              [](const Problem&, const Vector&, double) -> GlobalMinimum {
                                throw UnsupportedError("no");
                              }),
                  UnsupportedError);
}

TEST_CASE("solve dispatches the exact driver only with a minimizer") {
  CHECK_THROWS(solve(get_problem(502), Driver::exact, SolverConfig{}));
  CHECK(solve(get_problem(502), Driver::exact, SolverConfig{}, make_global_minimizer()).inform ==
        0);
}

TEST_CASE("every run either stops with a small residual or hits the penalty cap") {
  const SolverConfig config;
  for (Driver d : {Driver::alg2, Driver::alg3, Driver::phr}) {
    RunManifest m;
    m.problem_ids = suite_ids();
    for (const SolveReport& r : run_suite(m, d)) {
      CAPTURE(r.problem_id);
      CAPTURE(to_string(d));
      if (r.inform == 0) {
        CHECK(r.kkt_residual <= config.tol);
      } else {
        CHECK(r.annotation == kPenaltyTooLarge);
        const Problem p = get_problem(std::stoi(r.problem_id));
        const PointEval pe = evaluate_point(p, r.x);
        CHECK((pe.jacobian * pe.h).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("joint inner solves meet their tolerance") {
  RunManifest m;
  m.problem_ids = suite_ids();
  for (const SolveReport& r : run_suite(m, Driver::alg3)) {
    for (const OuterIteration& it : r.trace) {
      if (it.inner_status == InnerStatus::converged) CHECK(it.inner_grad_norm <= it.eps);
    }
  }
}

TEST_CASE("a stationary start stops before any inner iteration") {
  const Problem base = get_problem(502);
  const Problem at_solution("502@x*", 1, 1, base.callbacks(), Vector::Zero(1));
  for (Driver d : {Driver::alg2, Driver::alg3, Driver::phr}) {
    const SolveReport r = solve(at_solution, d, SolverConfig{});
    CHECK(r.inform == 0);
    CHECK(r.outer_iterations == 0);
    CHECK(r.inner_iterations == 0);
  }
}

TEST_CASE("reported lambda is the multiplier before projection") {
  SolverConfig config;
  config.lambda_min = -0.1;
  config.lambda_max = 0.1;
  const SolveReport r = solve_alg2(get_problem(509), config);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.lambda == r.trace.back().lambda);
  CHECK(std::abs(r.trace.back().lambda_bar(0)) <= 0.1);
}
