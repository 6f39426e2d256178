#include "sharpal/errors.hpp"
#include "sharpal/grid_kernels.hpp"
#include "sharpal/lagrangian.hpp"
#include "sharpal/oracle.hpp"
#include "sharpal/test_suite.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace sharpal;

namespace {
Vector v1(double a) { return Vector::Constant(1, a); }
}  // namespace

TEST_CASE("central differences") {
  CHECK(central_step(0.5) == 1e-6);
  CHECK(central_step(-300.0) == doctest::Approx(3e-4));
  const auto f = [](const Vector& x) { return x(0) * x(0) * x(1) + std::sin(x(1)); };
  Vector x(2);
  x << 1.5, -0.7;
  const Vector g = central_gradient(f, x);
  CHECK(g(0) == doctest::Approx(2 * 1.5 * -0.7).epsilon(1e-8));
  CHECK(g(1) == doctest::Approx(1.5 * 1.5 + std::cos(-0.7)).epsilon(1e-8));

  const auto h = [](const Vector& z) {
    Vector out(2);
    out << z(0) * z(1), z(0) + 3 * z(1);
    return out;
  };
  const Matrix J = central_jacobian(h, x);
  CHECK(J.rows() == 2);
  CHECK(J(0, 0) == doctest::Approx(-0.7));
  CHECK(J(1, 0) == doctest::Approx(1.5));
  CHECK(J(0, 1) == doctest::Approx(1.0));
  CHECK(J(1, 1) == doctest::Approx(3.0));

  CHECK(relative_error(v1(100.0), v1(100.01)) == doctest::Approx(1e-4));
  CHECK(relative_error(v1(0.0), v1(1e-7)) == doctest::Approx(1e-7));
}

TEST_CASE("gradient checks pass on every problem at the start point") {
  for (int id : suite_ids()) {
    CAPTURE(id);
    const Problem p = get_problem(id);
    const GradientCheckReport rep = check_gradients(p, {p.start_point()}, 1);
    CHECK(rep.points == 1);
    CHECK(rep.max_error() <= 1e-6);
  }
  const Problem cut = apply_cutoff(get_problem(513), CutoffTransform{10.0, true});
  CHECK(check_gradients(cut, random_probe_points(cut, 10, 1.0, 4), 4).max_error() <= 1e-6);
}

TEST_CASE("gradient check detects a wrong gradient") {
  const Problem good = get_problem(502);
  Problem::Callbacks cb = good.callbacks();
  cb.objective_gradient = [](const Vector& x) { return Vector(1.01 * x); };
  const Problem bad("bad", 1, 1, cb, good.start_point());
  CHECK(check_gradients(bad, {bad.start_point()}).objective > 1e-3);
}

TEST_CASE("grid kernels: serial and parallel agree") {
  const GridFunction fn = [](const Vector& x) {
    return std::cos(3 * x(0)) * std::sin(2 * x(1)) + 0.1 * x.squaredNorm();
  };
  TensorGrid grid{Vector::Constant(2, -2.0), Vector::Constant(2, 2.0), 61};
  CHECK(grid.size() == 61 * 61);
  CHECK(grid.spacing() == doctest::Approx(4.0 / 60));
  CHECK(grid.point(0) == grid.lower);
  CHECK(grid.point(grid.size() - 1) == grid.upper);
  const GridArgmin s = grid_argmin_serial(fn, grid);
  const GridArgmin p = grid_argmin_parallel(fn, grid);
  CHECK(s.index == p.index);
  CHECK(s.value == p.value);
  CHECK(s.point == p.point);

  // Ties go to the smallest index; NaN never wins.
  const GridFunction flat = [](const Vector& x) {
    return x(0) < 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  const GridArgmin t1 = grid_argmin_serial(flat, grid);
  const GridArgmin t2 = grid_argmin_parallel(flat, grid);
  CHECK(t1.index == t2.index);
  CHECK(grid.point(t1.index)(0) >= 0.0);

  std::vector<double> a{-1.0, 0.0, 1.0, 2.0};
  std::vector<double> b{0.5, 1.5, 2.5};
  const PairFunction pf = [](double x, double y) { return (x - 1.0) * (x - 1.0) + y; };
  const PairArgmin ps = pair_argmin_serial(pf, a, b);
  const PairArgmin pp = pair_argmin_parallel(pf, a, b);
  CHECK(ps.a == 1.0);
  CHECK(ps.b == 0.5);
  CHECK(ps.index == pp.index);
  CHECK(ps.value == pp.value);
}

TEST_CASE("global minimisation of the smoothing function") {
  const Problem p502 = get_problem(502);
  GridSpec grid = default_grid(p502);
  grid.lower = v1(-2.0);
  grid.upper = v1(2.0);
  const OracleMinimum m = global_minimize_smoothing(p502, v1(0.0), 1.0, grid);
  CHECK(std::abs(m.x(0)) <= 2 * m.resolution);
  CHECK(std::abs(m.value) <= 1e-6);
  CHECK(std::abs(m.t - p502.constraints(m.x).norm()) <= 2 * m.resolution);
  for (std::size_t i = 1; i < m.round_values.size(); ++i) {
    CHECK(m.round_values[i] <= m.round_values[i - 1]);
  }

  const Problem p506 = get_problem(506);
  const OracleMinimum m506 =
      global_minimize_smoothing(p506, v1(std::sqrt(0.5)), 20.0, default_grid(p506));
  // The sharp penalty leaves a valley thinner than the grid spacing along the
  // circle, which limits the incumbent to a few 1e-3.
  CHECK((m506.x - p506.known_solution()->minimizers[0]).norm() <= 1e-2);
  CHECK(m506.value <= -std::sqrt(2.0) + 1e-4);

  GridSpec serial = default_grid(p506);
  serial.parallel = false;
  const OracleMinimum ms = global_minimize_smoothing(p506, v1(0.3), 5.0, serial);
  const OracleMinimum mp = global_minimize_smoothing(p506, v1(0.3), 5.0, default_grid(p506));
  CHECK(ms.x == mp.x);
  CHECK(ms.value == mp.value);
}

TEST_CASE("global minimisation is limited to n <= 3") {
  Problem::Callbacks cb;
  cb.objective = [](const Vector& x) { return x.squaredNorm(); };
  cb.objective_gradient = [](const Vector& x) { return Vector(2 * x); };
  cb.constraints = [](const Vector& x) { return Vector::Constant(1, x.sum()); };
  cb.constraint_jacobian = [](const Vector& x) { return Matrix::Ones(x.size(), 1); };
  const Problem big("big", 4, 1, cb, Vector::Ones(4));
  CHECK_THROWS_AS(global_minimize_smoothing(big, v1(0.0), 1.0, default_grid(big)),
                  UnsupportedError);
}

TEST_CASE("grid spec validation") {
  GridSpec g = default_grid(get_problem(502));
  CHECK_NOTHROW(g.validate());
  g.points_per_axis = 1;
  CHECK_THROWS(g.validate());
  g = default_grid(get_problem(502));
  g.shrink = 0.5;
  CHECK_THROWS(g.validate());
  const GridSpec d = default_grid(get_problem(506));
  CHECK(d.upper(0) == doctest::Approx(15.0));
}

TEST_CASE("t grid cross-check agrees with ||h||") {
  const Problem p = get_problem(501);
  Vector x = p.start_point();
  const double h = p.constraints(x).norm();
  const TGridMinimum tg = t_grid_minimize(p, x, Vector::Zero(p.m()), 3.0, 2 * h + 1);
  CHECK(std::abs(tg.t - h) <= 2 * tg.resolution);
}

TEST_CASE("dual function: weak duality, monotone in r, tends to 0 on 502") {
  for (int id : {501, 502, 506, 507, 514}) {
    CAPTURE(id);
    const Problem p = get_problem(id);
    const double fstar = p.known_solution()->objective;
    const GridSpec grid = default_grid(p);
    double prev = -std::numeric_limits<double>::infinity();
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const double q = dual_value(p, Vector::Constant(p.m(), 0.2), r, grid);
      // The grid value bounds the infimum from above.
      CHECK(q <= fstar + 1e-4);
      CHECK(q >= prev - 1e-12);
      prev = q;
    }
  }
  const Problem p502 = get_problem(502);
  const double q_small = dual_value(p502, v1(0.0), 0.01, default_grid(p502));
  const double q_large = dual_value(p502, v1(0.0), 10.0, default_grid(p502));
  CHECK(q_large >= q_small);
  CHECK(std::abs(q_large) <= 1e-9);
}

TEST_CASE("no inexact stationary point without a barrier") {
  const Example1Verdict v = example1_witness(0.0, 2.0, 1e-4);
  CHECK_FALSE(v.witness_found);
  CHECK(v.analytically_excluded);
  CHECK(v.min_grad_norm > 1e-4);
  CHECK(v.threshold_eps == doctest::Approx(std::sqrt(8.0) - 2.0));

  Example1Search serial;
  serial.parallel = false;
  const Example1Verdict vs = example1_witness(0.0, 2.0, 1e-4, serial);
  CHECK(vs.min_grad_norm == v.min_grad_norm);
  CHECK(vs.argmin_t == v.argmin_t);

  const Example1Verdict loose = example1_witness(0.0, 2.0, 1.5);
  CHECK_FALSE(loose.analytically_excluded);
  CHECK(loose.threshold_eps == doctest::Approx(std::sqrt(8.0) - 2.0));
}

TEST_CASE("barrier stationary point of the toy problem") {
  const double lambda = 0.7;
  const double r = 2.0;
  const double s = 0.1;
  const BarrierStationaryPoint bp = example1_barrier_point(lambda, r, s);
  CHECK(bp.t == doctest::Approx(std::sqrt(bp.x * bp.x + s * s)).epsilon(1e-12));
  CHECK(bp.x == doctest::Approx(-lambda * bp.t / (bp.t + r)).epsilon(1e-12));
  const SmoothedEval e = barrier_eval(get_problem(502), v1(bp.x), bp.t, v1(lambda), r, s);
  CHECK(e.grad_x.norm() <= 1e-10);
  CHECK(std::abs(e.grad_t) <= 1e-10);
}
