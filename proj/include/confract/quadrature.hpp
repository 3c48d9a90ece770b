#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "confract/scalar_fn.hpp"
#include "confract/types.hpp"

namespace confract {

struct QuadratureConfig {
  enum class Method { AdaptiveSimpson, GaussLegendre };

  Method method = Method::AdaptiveSimpson;
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

namespace detail {

// acceptance floor relative to the local result: below ~50 ulp the error
// estimate is rounding noise and no amount of subdividing can shrink it
inline constexpr double kRoundoffRel = 50.0 * 2.2204460492503131e-16;

inline void check_quadrature_config(const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0))
    throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
  if (cfg.max_subdivisions < 1)
    throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
}

inline double checked_eval(const std::function<double(double)>& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v))
    throw EvaluationError("integrand evaluated to a non-finite value at t = " +
                          std::to_string(t));
  return v;
}

inline double simpson(double h, double fa, double fm, double fb) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

// Classic recursive adaptive Simpson with the /15 error estimate and the
// extrapolated correction added on acceptance. `splits` counts interval
// subdivisions against cfg.max_subdivisions.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double m,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, std::size_t max_splits, std::size_t& splits,
                                   int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked_eval(f, lm);
  const double frm = checked_eval(f, rm);
  const double h2 = 0.5 * (b - a);
  const double left = simpson(h2, fa, flm, fm);
  const double right = simpson(h2, fm, frm, fb);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= std::max(tol, kRoundoffRel * std::abs(left + right)))
    return left + right + err;
  if (splits >= max_splits)
    throw QuadratureError("adaptive Simpson: subdivision budget exhausted before reaching tolerance");
  // at ulp-wide panels the estimate is rounding-limited; accept it
  if (depth > 52 || lm <= a || rm >= b) return left + right + err;
  splits += 1;
  return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, max_splits, splits,
                              depth + 1) +
         adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, max_splits, splits,
                              depth + 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, std::size_t max_splits) {
  const double m = 0.5 * (a + b);
  const double fa = checked_eval(f, a);
  const double fm = checked_eval(f, m);
  const double fb = checked_eval(f, b);
  const double whole = simpson(b - a, fa, fm, fb);
  std::size_t splits = 0;
  return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_splits, splits, 0);
}

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double kGL7Nodes[4] = {0.0, 0.40584515137739718, 0.74153118559939446,
                                        0.94910791234275849};
inline constexpr double kGL7Weights[4] = {0.41795918367346896, 0.38183005050511831,
                                          0.27970539148927659, 0.12948496616887065};

inline double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = kGL7Weights[0] * checked_eval(f, mid);
  for (int i = 1; i < 4; ++i) {
    const double d = half * kGL7Nodes[i];
    acc += kGL7Weights[i] * (checked_eval(f, mid + d) + checked_eval(f, mid - d));
  }
  return acc * half;
}

// Composite fixed-order Gauss-Legendre with panel doubling until two
// successive refinements agree within abs_tol.
inline double gauss_legendre_composite(const std::function<double(double)>& f, double a, double b,
                                       double tol, std::size_t max_panels) {
  double prev = gauss_legendre_panel(f, a, b);
  for (std::size_t panels = 2;; panels *= 2) {
    if (panels > max_panels)
      throw QuadratureError("Gauss-Legendre: panel budget exhausted before reaching tolerance");
    double acc = 0.0;
    const double w = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i)
      acc += gauss_legendre_panel(f, a + w * static_cast<double>(i),
                                  a + w * static_cast<double>(i + 1));
    if (std::abs(acc - prev) <= std::max(tol, kRoundoffRel * std::abs(acc))) return acc;
    prev = acc;
  }
}

}  // namespace detail

/// Integrates an arbitrary callable over [a, b] to cfg.abs_tol, with a small
/// relative rounding floor so tolerances below the ulp scale of the result do
/// not spin forever. The integrand is taken as-is (no conformable weight).
/// Throws QuadratureError on budget exhaustion and EvaluationError on
/// non-finite integrand values.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureConfig& cfg = {}) {
  detail::check_quadrature_config(cfg);
  if (!(a <= b)) throw std::invalid_argument("integrate: require a <= b");
  if (a == b) return 0.0;
  if (cfg.method == QuadratureConfig::Method::AdaptiveSimpson)
    return detail::adaptive_simpson(f, a, b, cfg.abs_tol, cfg.max_subdivisions);
  return detail::gauss_legendre_composite(f, a, b, cfg.abs_tol, cfg.max_subdivisions);
}

/// Conformable integral I_alpha^a(f)(t) = int_a^t f(tau) tau^(alpha-1) dtau.
///
/// The weight tau^(alpha-1) is folded into the integrand; with a > 0 it is
/// never singular on the integration range, so no endpoint treatment is
/// needed. Returns exactly 0 when t == a.
inline double conf_integral(const ScalarFn& f, double a, double t, FractionalOrder alpha,
                            const QuadratureConfig& cfg = {}) {
  if (!(a > 0.0) || !(a <= t))
    throw std::domain_error("conf_integral: require 0 < a <= t");
  if (t == a) return 0.0;
  const double am1 = alpha.value() - 1.0;
  return integrate([&f, am1](double tau) { return f(tau) * std::pow(tau, am1); }, a, t, cfg);
}

/// Cumulative integral of `h` along a grid: result[k] = int_{grid[0]}^{grid[k]} h.
///
/// Accumulated panel by panel so a full trajectory costs one sweep instead of
/// re-integrating from the left endpoint for every grid node. Each panel gets
/// a tolerance share proportional to its width, keeping the summed error
/// within cfg.abs_tol.
inline std::vector<double> cumulative_integral(std::span<const double> grid,
                                               const std::function<double(double)>& h,
                                               const QuadratureConfig& cfg = {}) {
  detail::check_quadrature_config(cfg);
  if (grid.size() < 2) throw std::invalid_argument("cumulative_integral: need at least 2 grid points");
  std::vector<double> out(grid.size());
  out[0] = 0.0;
  const double total = grid.back() - grid.front();
  QuadratureConfig panel_cfg = cfg;
  double acc = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double lo = grid[k - 1];
    const double hi = grid[k];
    if (!(hi > lo)) throw std::invalid_argument("cumulative_integral: grid must be strictly increasing");
    panel_cfg.abs_tol = cfg.abs_tol * (hi - lo) / total;
    acc += integrate(h, lo, hi, panel_cfg);
    out[k] = acc;
  }
  return out;
}

}  // namespace confract
