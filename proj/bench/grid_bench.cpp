#include "sharpal/grid_kernels.hpp"
#include "sharpal/lagrangian.hpp"
#include "sharpal/test_suite.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

namespace {

using sharpal::Vector;

// Sharp Lagrangian of problem 506 on a 2-D box, the oracle's workload.
void grid_case(benchmark::State& state, bool parallel) {
  const sharpal::Problem problem = sharpal::get_problem(506);
  const Vector lambda = Vector::Constant(1, 0.5);
  const sharpal::GridFunction fn = [&](const Vector& x) {
    return sharpal::sharp_lagrangian(problem, x, lambda, 4.0);
  };
  sharpal::TensorGrid grid{Vector::Constant(2, -2.0), Vector::Constant(2, 2.0),
                           static_cast<int>(state.range(0))};
  for (auto _ : state) {
    auto best = parallel ? sharpal::grid_argmin_parallel(fn, grid)
                         : sharpal::grid_argmin_serial(fn, grid);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}

void BM_GridSerial(benchmark::State& state) { grid_case(state, false); }
void BM_GridParallel(benchmark::State& state) { grid_case(state, true); }

// Closed-form gradient norm of the toy smoothing function on an (x, t) grid.
void pair_case(benchmark::State& state, bool parallel) {
  const auto count = static_cast<std::size_t>(state.range(0));
  std::vector<double> xs(count);
  std::vector<double> ts(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(count - 1);
    ts[i] = 10.0 * static_cast<double>(i + 1) / static_cast<double>(count);
  }
  const double r = 2.0;
  const sharpal::PairFunction fn = [r](double x, double t) {
    const double gx = x + (r / t) * x;
    const double gt = 0.5 * r * (1.0 - x * x / (t * t));
    return std::hypot(gx, gt);
  };
  for (auto _ : state) {
    auto best = parallel ? sharpal::pair_argmin_parallel(fn, xs, ts)
                         : sharpal::pair_argmin_serial(fn, xs, ts);
    benchmark::DoNotOptimize(best);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count * count));
}

void BM_PairSerial(benchmark::State& state) { pair_case(state, false); }
void BM_PairParallel(benchmark::State& state) { pair_case(state, true); }

}  // namespace

BENCHMARK(BM_GridSerial)->Arg(101)->Arg(401);
BENCHMARK(BM_GridParallel)->Arg(101)->Arg(401);
BENCHMARK(BM_PairSerial)->Arg(500)->Arg(2000);
BENCHMARK(BM_PairParallel)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
