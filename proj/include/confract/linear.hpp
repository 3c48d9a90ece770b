#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "confract/calculus.hpp"
#include "confract/ivp.hpp"
#include "confract/quadrature.hpp"
#include "confract/scalar_fn.hpp"
#include "confract/trajectory.hpp"
#include "confract/types.hpp"

namespace confract {

/// Linear conformable initial value problem
///   x^(alpha)(t) + p(t) x(t) = g(t),  x(a) = x0.
struct LinearIVP {
  FractionalOrder alpha{1.0};
  Interval interval{1.0, 2.0};
  double x0 = 0.0;
  ScalarFn p;  // coefficient, arity 1
  ScalarFn g;  // forcing, arity 1

  void validate() const {
    if (!p.valid() || p.arity() != 1)
      throw std::invalid_argument("LinearIVP: p must be an arity-1 function of t");
    if (!g.valid() || g.arity() != 1)
      throw std::invalid_argument("LinearIVP: g must be an arity-1 function of t");
  }
};

/// Integrating factor mu(t) = exp(I_alpha^a(p)(t)); mu(a) = 1 exactly.
inline double integrating_factor(const ScalarFn& p, double a, FractionalOrder alpha, double t,
                                 const QuadratureConfig& cfg = {}) {
  if (t == a) return 1.0;
  return std::exp(conf_integral(p, a, t, alpha, cfg));
}

/// Closed-form solution of the special linear problem
///   x^(alpha) + a^(-alpha) x = g,  x(a) = x0,
/// evaluated on a uniform grid:
///   x(t) = e^(-(t/a)^alpha/alpha) (e^(1/alpha) x0 + J(t)),
///   J(t) = int_a^t g(s) e^((s/a)^alpha/alpha) s^(alpha-1) ds.
inline Trajectory solve_linear_special(const ScalarFn& g, FractionalOrder alpha, Interval interval,
                                       double x0, std::size_t grid_n,
                                       const QuadratureConfig& cfg = {}) {
  if (grid_n < 2) throw std::invalid_argument("solve_linear_special: grid_n must be >= 2");
  if (!g.valid() || g.arity() != 1)
    throw std::invalid_argument("solve_linear_special: g must be an arity-1 function");
  const double a = interval.a();
  const double al = alpha.value();
  const double c = 1.0 / al;
  const auto grid = uniform_grid(a, interval.b(), grid_n);
  const auto weighted = [&g, a, al, c](double s) {
    return g(s) * std::exp(c * std::pow(s / a, al)) * std::pow(s, al - 1.0);
  };
  const auto J = cumulative_integral(grid, weighted, cfg);
  std::vector<double> values(grid_n);
  values[0] = x0;  // e^(-1/alpha) e^(1/alpha) == 1 only in exact arithmetic
  for (std::size_t i = 1; i < grid_n; ++i)
    values[i] = std::exp(-c * std::pow(grid[i] / a, al)) * (std::exp(c) * x0 + J[i]);
  return Trajectory::make(grid, std::move(values), alpha);
}

/// Integrating-factor solution of the general linear problem on a uniform grid:
///   x(t) = (x0 mu(a) + I_alpha^a(mu g)(t)) / mu(t).
///
/// Both I_alpha^a(p) and I_alpha^a(mu g) are accumulated panel by panel along
/// the grid; inside a panel, mu(s) is reconstructed from the left panel edge
/// with a short local integral so no quadrature ever restarts from a.
inline Trajectory solve_linear_general(const LinearIVP& ivp, std::size_t grid_n,
                                       const QuadratureConfig& cfg = {}) {
  if (grid_n < 2) throw std::invalid_argument("solve_linear_general: grid_n must be >= 2");
  ivp.validate();
  const double a = ivp.interval.a();
  const double al = ivp.alpha.value();
  const auto grid = uniform_grid(a, ivp.interval.b(), grid_n);

  const auto p_weighted = [&ivp, al](double s) { return ivp.p(s) * std::pow(s, al - 1.0); };
  const auto P = cumulative_integral(grid, p_weighted, cfg);  // log mu at grid nodes

  // Inner integrals span at most one panel; keep their noise well below the
  // outer panel tolerance so the adaptive error estimate stays meaningful.
  QuadratureConfig inner_cfg = cfg;
  inner_cfg.abs_tol = std::max(1e-15, cfg.abs_tol * 1e-3 / static_cast<double>(grid_n));

  std::vector<double> J(grid_n, 0.0);
  double acc = 0.0;
  const double total = grid.back() - grid.front();
  QuadratureConfig panel_cfg = cfg;
  for (std::size_t k = 1; k < grid_n; ++k) {
    const double lo = grid[k - 1];
    const double hi = grid[k];
    const double log_mu_lo = P[k - 1];
    const auto mu_g_weighted = [&](double s) {
      const double log_mu = log_mu_lo + (s == lo ? 0.0 : integrate(p_weighted, lo, s, inner_cfg));
      return std::exp(log_mu) * ivp.g(s) * std::pow(s, al - 1.0);
    };
    panel_cfg.abs_tol = cfg.abs_tol * (hi - lo) / total;
    acc += integrate(mu_g_weighted, lo, hi, panel_cfg);
    J[k] = acc;
  }

  std::vector<double> values(grid_n);
  values[0] = ivp.x0;  // mu(a) = 1
  for (std::size_t i = 1; i < grid_n; ++i) values[i] = (ivp.x0 + J[i]) / std::exp(P[i]);
  return Trajectory::make(grid, std::move(values), ivp.alpha);
}

/// A-posteriori defect of a trajectory against the linear equation: the max
/// over interior grid points of |x^(alpha) + p x - g| with x^(alpha) taken
/// from the grid data by conformable finite differences.
inline double linear_residual(const Trajectory& traj, const LinearIVP& ivp) {
  if (traj.size() < 3)
    throw std::invalid_argument("linear_residual: need at least 3 grid points");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
    const double t = traj.grid[i];
    const double r = conformable_diff(traj, i) + ivp.p(t) * traj.values[i] - ivp.g(t);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// The general linear problem as a nonlinear IVP, f(t, x) = g(t) - p(t) x.
inline IVP to_ivp(const LinearIVP& ivp) {
  ivp.validate();
  ScalarFn p = ivp.p;
  ScalarFn g = ivp.g;
  return IVP{ivp.alpha, ivp.interval, ivp.x0,
             ScalarFn::of_tx([p, g](double t, double x) { return g(t) - p(t) * x; })};
}

/// The special linear problem as a nonlinear IVP, f(t, x) = g(t) - a^(-alpha) x.
inline IVP special_to_ivp(const ScalarFn& g, FractionalOrder alpha, Interval interval, double x0) {
  const double coeff = std::pow(interval.a(), -alpha.value());
  ScalarFn gc = g;
  return IVP{alpha, interval, x0,
             ScalarFn::of_tx([gc, coeff](double t, double x) { return gc(t) - coeff * x; })};
}

}  // namespace confract
