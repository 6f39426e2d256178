#include "sharpal/grid_kernels.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sharpal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kInf : v; }

// (value, index) ordering; lower index wins ties.
bool better(double value, std::int64_t index, double best_value, std::int64_t best_index) {
  if (value < best_value) return true;
  return value == best_value && (best_index < 0 || index < best_index);
}

void check_grid(const TensorGrid& grid) {
  if (grid.lower.size() != grid.upper.size() || grid.lower.size() == 0) {
    throw std::invalid_argument("grid bounds must have the same nonzero dimension");
  }
  if (grid.points_per_axis < 2) throw std::invalid_argument("grid needs >= 2 points per axis");
}

}  // namespace

std::int64_t TensorGrid::size() const {
  std::int64_t total = 1;
  for (Eigen::Index d = 0; d < lower.size(); ++d) total *= points_per_axis;
  return total;
}

Vector TensorGrid::point(std::int64_t index) const {
  const Eigen::Index dims = lower.size();
  Vector x(dims);
  for (Eigen::Index d = dims - 1; d >= 0; --d) {
    const std::int64_t i = index % points_per_axis;
    index /= points_per_axis;
    const double frac = static_cast<double>(i) / (points_per_axis - 1);
    x(d) = lower(d) + (upper(d) - lower(d)) * frac;
  }
  return x;
}

double TensorGrid::spacing() const {
  return ((upper - lower) / static_cast<double>(points_per_axis - 1)).maxCoeff();
}

GridArgmin grid_argmin_serial(const GridFunction& fn, const TensorGrid& grid) {
  check_grid(grid);
  GridArgmin best;
  best.value = kInf;
  const std::int64_t total = grid.size();
  for (std::int64_t i = 0; i < total; ++i) {
    const double v = sanitize(fn(grid.point(i)));
    if (better(v, i, best.value, best.index)) {
      best.value = v;
      best.index = i;
    }
  }
  best.point = grid.point(best.index);
  return best;
}

GridArgmin grid_argmin_parallel(const GridFunction& fn, const TensorGrid& grid) {
  check_grid(grid);
  double best_value = kInf;
  std::int64_t best_index = -1;
  const std::int64_t total = grid.size();

#pragma omp parallel
  {
    double local_value = kInf;
    std::int64_t local_index = -1;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      const double v = sanitize(fn(grid.point(i)));
      if (better(v, i, local_value, local_index)) {
        local_value = v;
        local_index = i;
      }
    }
#pragma omp critical(sharpal_grid_argmin)
    {
      if (local_index >= 0 && better(local_value, local_index, best_value, best_index)) {
        best_value = local_value;
        best_index = local_index;
      }
    }
  }

  GridArgmin best;
  best.value = best_value;
  best.index = best_index;
  best.point = grid.point(best_index);
  return best;
}

PairArgmin pair_argmin_serial(const PairFunction& fn, std::span<const double> a_axis,
                              std::span<const double> b_axis) {
  PairArgmin best;
  best.value = kInf;
  const auto nb = static_cast<std::int64_t>(b_axis.size());
  const std::int64_t total = static_cast<std::int64_t>(a_axis.size()) * nb;
  for (std::int64_t i = 0; i < total; ++i) {
    const double a = a_axis[static_cast<std::size_t>(i / nb)];
    const double b = b_axis[static_cast<std::size_t>(i % nb)];
    const double v = sanitize(fn(a, b));
    if (better(v, i, best.value, best.index)) {
      best = {i, v, a, b};
    }
  }
  return best;
}

PairArgmin pair_argmin_parallel(const PairFunction& fn, std::span<const double> a_axis,
                                std::span<const double> b_axis) {
  PairArgmin best;
  best.value = kInf;
  const auto nb = static_cast<std::int64_t>(b_axis.size());
  const std::int64_t total = static_cast<std::int64_t>(a_axis.size()) * nb;

#pragma omp parallel
  {
    PairArgmin local;
    local.value = kInf;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      const double a = a_axis[static_cast<std::size_t>(i / nb)];
      const double b = b_axis[static_cast<std::size_t>(i % nb)];
      const double v = sanitize(fn(a, b));
      if (better(v, i, local.value, local.index)) local = {i, v, a, b};
    }
#pragma omp critical(sharpal_pair_argmin)
    {
      if (local.index >= 0 && better(local.value, local.index, best.value, best.index)) {
        best = local;
      }
    }
  }
  return best;
}

}  // namespace sharpal
