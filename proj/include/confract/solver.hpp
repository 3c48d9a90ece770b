#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "confract/ivp.hpp"
#include "confract/quadrature.hpp"
#include "confract/trajectory.hpp"
#include "confract/tube.hpp"
#include "confract/types.hpp"

namespace confract {

struct SolverConfig {
  std::size_t grid_n = 1001;
  double picard_tol = 1e-10;
  std::size_t max_iter = 60;
  double relaxation = 1.0;  // in (0, 1]; halved automatically on stagnation

  void validate() const {
    if (grid_n < 2) throw std::invalid_argument("SolverConfig: grid_n must be >= 2");
    if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (!(relaxation > 0.0) || relaxation > 1.0)
      throw std::invalid_argument("SolverConfig: relaxation must be in (0, 1]");
  }
};

struct SolveResult {
  Trajectory trajectory;
  std::size_t iterations = 0;
  bool converged = false;
  double final_delta = std::numeric_limits<double>::infinity();
  bool in_tube = false;
  double tube_margin = std::numeric_limits<double>::infinity();  // max of |x - v| - M
  bool oracle_fallback = false;
};

namespace detail {

constexpr double kBlowUpBound = 1e12;

inline void check_ivp_cert(const IVP& ivp, const TubeCertificate& cert) {
  ivp.validate();
  cert.validate();
  if (cert.alpha != ivp.alpha || cert.interval != ivp.interval)
    throw std::invalid_argument("certificate and problem disagree on alpha/interval");
}

inline void check_blow_up(double v, double t) {
  if (!std::isfinite(v) || std::abs(v) > kBlowUpBound)
    throw BlowUpError("state magnitude exceeded " + std::to_string(kBlowUpBound) + " near t = " +
                      std::to_string(t));
}

// Fixed-step classical RK4 for x' = rhs(t, x) on an existing grid.
template <typename Rhs>
std::vector<double> rk4(const std::vector<double>& grid, double x0, const Rhs& rhs) {
  std::vector<double> x(grid.size());
  x[0] = x0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid[i];
    const double h = grid[i + 1] - grid[i];
    const double k1 = rhs(t, x[i]);
    const double k2 = rhs(t + 0.5 * h, x[i] + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, x[i] + 0.5 * h * k2);
    const double k4 = rhs(t + h, x[i] + h * k3);
    x[i + 1] = x[i] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_blow_up(x[i + 1], grid[i + 1]);
  }
  return x;
}

}  // namespace detail

/// One application of the fixed-point operator for the truncated auxiliary
/// problem x^(alpha) + a^(-alpha) x = f(t, xt) + a^(-alpha) xt, where
/// xt = truncate(x, v, M):
///
///   N(x)(t) = e^(-(t/a)^alpha/alpha) (e^(1/alpha) x0
///             + int_a^t (f(s, xt) + a^(-alpha) xt) e^((s/a)^alpha/alpha) s^(alpha-1) ds).
///
/// The input trajectory is read through piecewise-linear interpolation at
/// quadrature nodes; the weighted integral is accumulated panel by panel
/// along the input grid. Output value at a equals x0 exactly.
inline Trajectory apply_N(const Trajectory& x, const IVP& ivp, const TubeCertificate& cert,
                          const QuadratureConfig& cfg = {}) {
  detail::check_ivp_cert(ivp, cert);
  x.validate();
  if (x.a() != ivp.interval.a() || x.b() != ivp.interval.b())
    throw std::invalid_argument("apply_N: trajectory grid must span the problem interval");

  const double a = ivp.interval.a();
  const double al = ivp.alpha.value();
  const double c = 1.0 / al;
  const double inv_a_al = std::pow(a, -al);

  const auto integrand = [&](double s) {
    const double xt = truncate(x.value_at(s), cert.v(s), cert.M(s));
    return (ivp.f(s, xt) + inv_a_al * xt) * std::exp(c * std::pow(s / a, al)) *
           std::pow(s, al - 1.0);
  };
  const auto J = cumulative_integral(x.grid, integrand, cfg);

  std::vector<double> values(x.size());
  values[0] = ivp.x0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    values[i] = std::exp(-c * std::pow(x.grid[i] / a, al)) * (std::exp(c) * ivp.x0 + J[i]);
    detail::check_blow_up(values[i], x.grid[i]);
  }
  return Trajectory::make(x.grid, std::move(values), ivp.alpha);
}

/// Classical-ODE reference solution: fixed-step RK4 applied to the
/// transformed equation x'(t) = t^(alpha-1) f(t, x(t)), x(a) = x0, which is
/// equivalent to the conformable problem for differentiable solutions.
/// Throws BlowUpError when the state magnitude passes 1e12.
inline Trajectory transform_oracle(const IVP& ivp, std::size_t grid_n) {
  ivp.validate();
  if (grid_n < 2) throw std::invalid_argument("transform_oracle: grid_n must be >= 2");
  const double al = ivp.alpha.value();
  const auto grid = uniform_grid(ivp.interval.a(), ivp.interval.b(), grid_n);
  auto values = detail::rk4(grid, ivp.x0, [&](double t, double y) {
    return std::pow(t, al - 1.0) * ivp.f(t, y);
  });
  return Trajectory::make(grid, std::move(values), ivp.alpha);
}

/// RK4 on the truncated auxiliary problem in classical form,
///   x' = t^(alpha-1) (f(t, xt) + a^(-alpha) (xt - x)),  xt = truncate(x, v, M).
/// Under a valid certificate its solution stays in the tube.
inline Trajectory truncated_transform_oracle(const IVP& ivp, const TubeCertificate& cert,
                                             std::size_t grid_n) {
  detail::check_ivp_cert(ivp, cert);
  if (grid_n < 2)
    throw std::invalid_argument("truncated_transform_oracle: grid_n must be >= 2");
  const double al = ivp.alpha.value();
  const double inv_a_al = std::pow(ivp.interval.a(), -al);
  const auto grid = uniform_grid(ivp.interval.a(), ivp.interval.b(), grid_n);
  auto values = detail::rk4(grid, ivp.x0, [&](double t, double y) {
    const double yt = truncate(y, cert.v(t), cert.M(t));
    return std::pow(t, al - 1.0) * (ivp.f(t, yt) + inv_a_al * (yt - y));
  });
  return Trajectory::make(grid, std::move(values), ivp.alpha);
}

/// Damped Picard iteration x_{k+1} = (1 - lambda) x_k + lambda N(x_k),
/// started from the constant trajectory x0, until the sup-norm update falls
/// below scfg.picard_tol or scfg.max_iter is reached.
///
/// The operator is not proven contractive, so lambda is halved (down to
/// 1/16 of the configured value) whenever the update size fails to decrease
/// for 3 consecutive iterations. On non-convergence the result switches to
/// the truncated-oracle trajectory with oracle_fallback set; a solution is
/// guaranteed to exist, the iteration is merely one way of finding it.
inline SolveResult picard_solve(const IVP& ivp, const TubeCertificate& cert,
                                const SolverConfig& scfg = {}, const QuadratureConfig& qcfg = {}) {
  detail::check_ivp_cert(ivp, cert);
  scfg.validate();

  // An invalid certificate is not an error here (the iteration may still
  // land somewhere useful), but the caller should know.
  if (const auto pre = verify_tube(cert, ivp, 101, 1e-6); !pre.tube_solution())
    std::cerr << "picard_solve: certificate failed a 101-sample verification; "
                 "membership of the result is not guaranteed\n";

  const auto grid = uniform_grid(ivp.interval.a(), ivp.interval.b(), scfg.grid_n);
  Trajectory x = Trajectory::make(grid, std::vector<double>(scfg.grid_n, ivp.x0), ivp.alpha);

  SolveResult res;
  double lambda = scfg.relaxation;
  const double lambda_floor = scfg.relaxation / 16.0;
  double prev_delta = std::numeric_limits<double>::infinity();
  int stagnant = 0;

  for (std::size_t k = 0; k < scfg.max_iter; ++k) {
    Trajectory nx = apply_N(x, ivp, cert, qcfg);
    const double delta = sup_distance(nx, x);
    res.iterations = k + 1;
    res.final_delta = delta;
    if (delta <= scfg.picard_tol) {
      res.converged = true;
      x = std::move(nx);  // keep the image: it satisfies the initial condition exactly
      break;
    }
    if (delta >= prev_delta) {
      if (++stagnant >= 3 && lambda > lambda_floor) {
        lambda = std::max(lambda_floor, 0.5 * lambda);
        stagnant = 0;
      }
    } else {
      stagnant = 0;
    }
    prev_delta = delta;
    if (lambda == 1.0) {
      x = std::move(nx);
    } else {
      for (std::size_t i = 0; i < x.size(); ++i)
        x.values[i] = (1.0 - lambda) * x.values[i] + lambda * nx.values[i];
    }
  }

  if (!res.converged) {
    x = truncated_transform_oracle(ivp, cert, scfg.grid_n);
    res.oracle_fallback = true;
  }
  res.trajectory = std::move(x);

  const auto [inside, worst] = membership(res.trajectory, cert, 1e-9);
  res.in_tube = inside;
  res.tube_margin = worst;
  return res;
}

}  // namespace confract
