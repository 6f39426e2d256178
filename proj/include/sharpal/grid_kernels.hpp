#pragma once

#include "sharpal/problem.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace sharpal {

/// Axis-aligned tensor grid with the same number of nodes on every axis.
/// Node indices are lexicographic with the first coordinate most significant,
/// so index order equals lexicographic point order.
struct TensorGrid {
  Vector lower;
  Vector upper;
  int points_per_axis = 3;

  std::int64_t size() const;
  Vector point(std::int64_t index) const;
  /// Largest node spacing over the axes.
  double spacing() const;
};

struct GridArgmin {
  std::int64_t index = -1;
  double value = 0.0;
  Vector point;
};

using GridFunction = std::function<double(const Vector&)>;

/// Reference implementation: plain loop over all nodes. NaN counts as +inf.
/// Ties go to the smallest index.
GridArgmin grid_argmin_serial(const GridFunction& fn, const TensorGrid& grid);

/// OpenMP version of grid_argmin_serial. The reduction compares (value, index)
/// pairs, so the result is identical for every thread count.
GridArgmin grid_argmin_parallel(const GridFunction& fn, const TensorGrid& grid);

/// Minimum of fn over an explicit list of 2-D nodes (a, b), serial and OpenMP.
/// Used for grids whose axes are not uniform.
struct PairArgmin {
  std::int64_t index = -1;
  double value = 0.0;
  double a = 0.0;
  double b = 0.0;
};
using PairFunction = std::function<double(double, double)>;

PairArgmin pair_argmin_serial(const PairFunction& fn, std::span<const double> a_axis,
                              std::span<const double> b_axis);
PairArgmin pair_argmin_parallel(const PairFunction& fn, std::span<const double> a_axis,
                                std::span<const double> b_axis);

}  // namespace sharpal
