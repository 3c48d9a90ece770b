#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "confract/calculus.hpp"
#include "confract/ivp.hpp"
#include "confract/scalar_fn.hpp"
#include "confract/trajectory.hpp"
#include "confract/types.hpp"

namespace confract {

/// Candidate tube certificate: center v and radius M >= 0 on [a, b]. A valid
/// certificate guarantees the problem has a solution staying within radius M
/// of v on the whole interval.
struct TubeCertificate {
  ScalarFn v;  // center, arity 1
  ScalarFn M;  // radius, arity 1
  FractionalOrder alpha{1.0};
  Interval interval{1.0, 2.0};

  void validate() const {
    if (!v.valid() || v.arity() != 1)
      throw std::invalid_argument("TubeCertificate: v must be an arity-1 function");
    if (!M.valid() || M.arity() != 1)
      throw std::invalid_argument("TubeCertificate: M must be an arity-1 function");
  }
};

struct TubeWitness {
  double t = 0.0;
  double y = 0.0;
  int condition = 0;  // 1, 2 or 3
};

/// Outcome of a sampled certificate check. Sampling cannot prove the
/// conditions for every t, so the worst observed margins are exposed along
/// with any failing sample points.
struct TubeReport {
  bool cond_i_ok = false;
  bool cond_ii_ok = false;
  bool cond_iii_ok = false;
  double worst_margin_i = -std::numeric_limits<double>::infinity();
  double worst_margin_ii = 0.0;
  double worst_margin_iii = 0.0;
  std::size_t samples = 0;
  std::size_t zero_radius_samples = 0;
  std::vector<TubeWitness> witnesses;  // capped at kMaxWitnesses

  static constexpr std::size_t kMaxWitnesses = 32;

  bool tube_solution() const { return cond_i_ok && cond_ii_ok && cond_iii_ok; }
};

/// Radial projection onto the tube cross-section at one time: in the scalar
/// case this is exactly the clamp of x to [v - M, v + M]. Requires M >= 0.
inline double truncate(double x_val, double v_val, double M_val) {
  const double lo = v_val - M_val;
  const double hi = v_val + M_val;
  return x_val < lo ? lo : (x_val > hi ? hi : x_val);
}

/// Checks |x(t) - v(t)| <= M(t) at every grid point. Returns whether the
/// worst excess r(t) = |x - v| - M stays below tol, and that worst excess.
inline std::pair<bool, double> membership(const Trajectory& traj, const TubeCertificate& cert,
                                          double tol) {
  cert.validate();
  if (traj.a() < cert.interval.a() - 1e-12 || traj.b() > cert.interval.b() + 1e-12)
    throw std::invalid_argument("membership: trajectory grid leaves the certificate interval");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.grid[i];
    const double r = std::abs(traj.values[i] - cert.v(t)) - cert.M(t);
    worst = std::max(worst, r);
  }
  return {worst <= tol, worst};
}

namespace detail {

// Conformable derivative of a certificate function: exact when a closed form
// is attached, finite differences otherwise (one-sided at the endpoints,
// where the function is only known on [a, b]).
inline double cert_deriv(const ScalarFn& fn, double t, FractionalOrder alpha, Interval interval) {
  if (fn.closed_form()) return conf_deriv_closed(*fn.closed_form(), t, alpha);
  DerivMode mode = DerivMode::Central;
  const double eps = default_deriv_eps(t, alpha);
  const double h = eps * std::pow(t, 1.0 - alpha.value());
  if (t - h < interval.a()) mode = DerivMode::Forward;
  else if (t + h > interval.b()) mode = DerivMode::Backward;
  return conf_deriv_numeric(fn, t, alpha, eps, mode);
}

inline void add_witness(TubeReport& report, double t, double y, int condition) {
  if (report.witnesses.size() < TubeReport::kMaxWitnesses)
    report.witnesses.push_back({t, y, condition});
}

}  // namespace detail

/// Sampled verification of the three tube-solution conditions on a uniform
/// grid of samples_n points:
///
///   (i)  (y - v)(f(t, y) - v^(alpha)) <= M M^(alpha) at both boundary points
///        y = v(t) +/- M(t) (the whole set {y : |y - v(t)| = M(t)} in the
///        scalar case);
///  (ii)  v^(alpha) = f(t, v) and M^(alpha) = 0 wherever M(t) <= tol, the
///        zero-radius detection threshold;
/// (iii)  |x0 - v(a)| <= M(a).
///
/// A condition passes when its worst margin stays below tol.
inline TubeReport verify_tube(const TubeCertificate& cert, const IVP& ivp,
                              std::size_t samples_n = 1001, double tol = 1e-9) {
  cert.validate();
  ivp.validate();
  if (samples_n < 2) throw std::invalid_argument("verify_tube: samples_n must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("verify_tube: tol must be > 0");
  if (cert.alpha != ivp.alpha || cert.interval != ivp.interval)
    throw std::invalid_argument("verify_tube: certificate and problem disagree on alpha/interval");

  TubeReport report;
  report.samples = samples_n;
  bool neg = false, ii_fail = false;
  const auto ts = uniform_grid(cert.interval.a(), cert.interval.b(), samples_n);

  for (const double t : ts) {
    const double v_t = cert.v(t);
    const double M_t = cert.M(t);
    if (M_t < 0.0) {
      // malformed radius; Definition requires M >= 0
      neg = true;
      detail::add_witness(report, t, v_t, 1);
      continue;
    }
    const double v_alpha = detail::cert_deriv(cert.v, t, cert.alpha, cert.interval);
    const double M_alpha = detail::cert_deriv(cert.M, t, cert.alpha, cert.interval);
    const double rhs = M_t * M_alpha;

    for (const double y : {v_t + M_t, v_t - M_t}) {
      const double margin = (y - v_t) * (ivp.f(t, y) - v_alpha) - rhs;
      if (margin > report.worst_margin_i) report.worst_margin_i = margin;
      if (margin > tol) detail::add_witness(report, t, y, 1);
    }

    if (M_t <= tol) {
      report.zero_radius_samples += 1;
      const double dev = std::max(std::abs(v_alpha - ivp.f(t, v_t)), std::abs(M_alpha));
      if (dev > report.worst_margin_ii) report.worst_margin_ii = dev;
      if (dev > tol) {
        ii_fail = true;
        detail::add_witness(report, t, v_t, 2);
      }
    }
  }

  report.cond_i_ok = !neg && report.worst_margin_i <= tol;
  report.cond_ii_ok = !ii_fail;

  const double a = cert.interval.a();
  report.worst_margin_iii = std::abs(ivp.x0 - cert.v(a)) - cert.M(a);
  report.cond_iii_ok = report.worst_margin_iii <= tol;
  if (!report.cond_iii_ok) detail::add_witness(report, a, ivp.x0, 3);

  return report;
}

}  // namespace confract
