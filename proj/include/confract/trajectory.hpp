#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confract/types.hpp"

namespace confract {

/// A sampled numerical solution: values x(t_i) on a strictly increasing grid.
/// Grids are uniform when produced by the solvers here, but any strictly
/// increasing grid is accepted.
struct Trajectory {
  std::vector<double> grid;
  std::vector<double> values;
  FractionalOrder alpha{1.0};

  static Trajectory make(std::vector<double> grid, std::vector<double> values,
                         FractionalOrder alpha) {
    Trajectory t{std::move(grid), std::move(values), alpha};
    t.validate();
    return t;
  }

  void validate() const {
    if (grid.size() != values.size())
      throw std::invalid_argument("Trajectory: grid/values length mismatch");
    if (grid.size() < 2) throw std::invalid_argument("Trajectory: need at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
        throw std::invalid_argument("Trajectory: non-finite entry at index " + std::to_string(i));
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw std::invalid_argument("Trajectory: grid must be strictly increasing");
    }
  }

  std::size_t size() const { return grid.size(); }
  double a() const { return grid.front(); }
  double b() const { return grid.back(); }

  /// Piecewise-linear interpolation; t is clamped to [a, b].
  double value_at(double t) const {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
  }
};

/// n equally spaced points on [a, b]; both endpoints are exact.
inline std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need n >= 2");
  if (!(a < b)) throw std::invalid_argument("uniform_grid: require a < b");
  std::vector<double> g(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
  g.back() = b;
  return g;
}

/// Max pointwise distance between two trajectories on the same grid.
inline double sup_distance(const Trajectory& x, const Trajectory& y) {
  if (x.grid != y.grid)
    throw std::invalid_argument("sup_distance: trajectories must share a grid");
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x.values[i] - y.values[i]));
  return d;
}

/// Conformable finite difference on sampled data:
/// t^(1-alpha) times the three-point estimate of x'(t_i). Handles non-uniform
/// grids; endpoints use the one-sided two-point slope.
inline double conformable_diff(const Trajectory& x, std::size_t i) {
  const std::size_t n = x.size();
  if (i >= n) throw std::out_of_range("conformable_diff: index out of range");
  double slope;
  if (i == 0) {
    slope = (x.values[1] - x.values[0]) / (x.grid[1] - x.grid[0]);
  } else if (i == n - 1) {
    slope = (x.values[n - 1] - x.values[n - 2]) / (x.grid[n - 1] - x.grid[n - 2]);
  } else {
    const double hl = x.grid[i] - x.grid[i - 1];
    const double hr = x.grid[i + 1] - x.grid[i];
    slope = (hl * hl * x.values[i + 1] - hr * hr * x.values[i - 1] +
             (hr * hr - hl * hl) * x.values[i]) /
            (hl * hr * (hl + hr));
  }
  return std::pow(x.grid[i], 1.0 - x.alpha.value()) * slope;
}

}  // namespace confract
