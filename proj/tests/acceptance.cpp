// Acceptance gate: eight end-to-end checks with pinned tolerances and runtime
// budgets, one PASS/FAIL line each. Exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "confract/confract.hpp"

using namespace confract;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string reason;

  void expect(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      reason = why;
    }
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

bool criterion(int idx, const char* name, double budget_s,
               const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  if (c.ok && budget_s > 0.0 && elapsed > budget_s)
    c.expect(false, "runtime " + num(elapsed) + " s exceeds the " + num(budget_s) + " s budget");
  if (c.ok)
    std::printf("PASS  %d. %s  [%.2f s]\n", idx, name, elapsed);
  else
    std::printf("FAIL  %d. %s  [%.2f s]  %s\n", idx, name, elapsed, c.reason.c_str());
  return c.ok;
}

ScalarFn poly_fn(std::vector<double> coeffs) {
  return ScalarFn::of_t([coeffs = std::move(coeffs)](double t) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
  });
}

ScalarFn cubic_exponential_rhs(double c1, double c2, double c) {
  return ScalarFn::of_tx([c1, c2, c](double t, double x) {
    return c1 * std::sqrt(t) / (1.0 + t) * x * x * x + c2 * x * std::exp(c * x);
  });
}

TubeCertificate unit_tube(FractionalOrder alpha, Interval iv, double radius) {
  return TubeCertificate{ScalarFn::of_closed(ClosedForm::constant(0.0), alpha),
                         ScalarFn::of_closed(ClosedForm::constant(radius), alpha), alpha, iv};
}

const FractionalOrder kHalf{0.5};
const Interval kUnitSpan{1.0, 2.0};

// 1. The cubic-exponential model with zero start: the certificate (0, 1) is
//    accepted, the iteration converges to the zero trajectory, and every
//    grid point sits at depth 1 inside the tube.
void c1_zero_start(Check& c) {
  const IVP ivp{kHalf, kUnitSpan, 0.0, cubic_exponential_rhs(-1.0, -1.0, 1.0)};
  const TubeCertificate cert = unit_tube(kHalf, kUnitSpan, 1.0);

  const TubeReport rep = verify_tube(cert, ivp, 1001, 1e-9);
  c.expect(rep.tube_solution(), "certificate rejected by the sampled check");

  const SolveResult res = picard_solve(ivp, cert, SolverConfig{}, QuadratureConfig{});
  c.expect(res.converged, "fixed-point iteration did not converge");
  double sup = 0.0;
  for (const double x : res.trajectory.values) sup = std::max(sup, std::abs(x));
  c.expect(sup <= 1e-8, "sup distance to the zero trajectory is " + num(sup) + " > 1e-8");

  const auto [inside, worst] = membership(res.trajectory, cert, 1e-9);
  c.expect(inside && worst <= -1.0 + 1e-8,
           "worst membership excess " + num(worst) + " > -1 + 1e-8");
}

// 2. Perturbed starts x0 in {0.25, 0.5, 0.9}: the delivered trajectory stays
//    inside |x| <= 1 + 1e-6 and matches the classical transform oracle to
//    1e-4 in sup norm on a 2001-point grid.
void c2_perturbed_starts(Check& c) {
  const ScalarFn f = cubic_exponential_rhs(-1.0, -1.0, 1.0);
  const TubeCertificate cert = unit_tube(kHalf, kUnitSpan, 1.0);
  SolverConfig scfg;
  scfg.grid_n = 2001;
  for (const double x0 : {0.25, 0.5, 0.9}) {
    const IVP ivp{kHalf, kUnitSpan, x0, f};
    const SolveResult res = picard_solve(ivp, cert, scfg, QuadratureConfig{});
    double bound = 0.0;
    for (const double x : res.trajectory.values) bound = std::max(bound, std::abs(x));
    c.expect(bound <= 1.0 + 1e-6,
             "x0=" + num(x0) + ": |x| reaches " + num(bound) + " > 1 + 1e-6");
    const double gap = sup_distance(res.trajectory, transform_oracle(ivp, 2001));
    c.expect(gap <= 1e-4, "x0=" + num(x0) + ": oracle gap " + num(gap) + " > 1e-4");
  }
}

// 3. Constant-coefficient closed form for g = 0 and g = 1, x0 in {0, 1}:
//    matches the transform oracle to 1e-6 and starts exactly at x0.
void c3_constant_coefficient(Check& c) {
  for (const double gv : {0.0, 1.0}) {
    const ScalarFn g = ScalarFn::of_closed(ClosedForm::constant(gv), kHalf);
    for (const double x0 : {0.0, 1.0}) {
      const Trajectory sol = solve_linear_special(g, kHalf, kUnitSpan, x0, 2001,
                                                  QuadratureConfig{});
      c.expect(sol.values[0] == x0, "start value is not exact");
      const double gap =
          sup_distance(sol, transform_oracle(special_to_ivp(g, kHalf, kUnitSpan, x0), 2001));
      c.expect(gap <= 1e-6,
               "g=" + num(gv) + ", x0=" + num(x0) + ": oracle gap " + num(gap) + " > 1e-6");
    }
  }
}

// 4. With constant coefficient p = a^(-alpha) the general variable-coefficient
//    solver agrees with the dedicated constant-coefficient solver to 1e-8
//    over 20 randomized instances.
void c4_general_vs_special(Check& c) {
  std::mt19937 rng(20260825);
  std::uniform_real_distribution<double> au(0.5, 2.0), wu(1.0, 3.0), alu(0.3, 1.0),
      xu(-2.0, 2.0), cu(-2.0, 2.0);
  QuadratureConfig quad;
  quad.abs_tol = 1e-12;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const FractionalOrder alpha{alu(rng)};
    const double a = au(rng);
    const Interval iv{a, a + wu(rng)};
    const double x0 = xu(rng);
    const ScalarFn g = poly_fn({cu(rng), cu(rng), cu(rng), cu(rng)});
    const double pa = std::pow(a, -alpha.value());
    const LinearIVP lin{alpha, iv, x0, ScalarFn::of_t([pa](double) { return pa; }), g};

    const Trajectory general = solve_linear_general(lin, 201, quad);
    const Trajectory special = solve_linear_special(g, alpha, iv, x0, 201, quad);
    worst = std::max(worst, sup_distance(general, special));
  }
  c.expect(worst <= 1e-8, "worst sup gap over 20 instances is " + num(worst) + " > 1e-8");
}

// 5. The four derivative closed forms against the finite-difference routine
//    at 50 random (t, alpha) points each, and the eigenfunction identity.
void c5_closed_forms(Check& c) {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> tu(0.5, 3.0), alu(0.05, 1.0), pu(0.5, 3.0),
      cu(0.5, 2.0);
  std::bernoulli_distribution flip;

  const auto check_form = [&](const char* label, const ClosedForm& form, double t,
                              FractionalOrder alpha) {
    const double exact = conf_deriv_closed(form, t, alpha);
    const double approx = conf_deriv_numeric(ScalarFn::of_closed(form, alpha), t, alpha);
    const double err = std::abs(approx - exact) / std::max(1.0, std::abs(exact));
    c.expect(err <= 1e-6, std::string(label) + ": relative error " + num(err) + " > 1e-6");
  };

  for (int i = 0; i < 50; ++i) {
    const FractionalOrder alpha{alu(rng)};
    const double t = tu(rng);
    const double sign = flip(rng) ? 1.0 : -1.0;
    check_form("power", ClosedForm::power(pu(rng)), t, alpha);
    check_form("constant", ClosedForm::constant(sign * cu(rng)), t, alpha);
    check_form("exponential", ClosedForm::exponential(sign * cu(rng)), t, alpha);
    check_form("eigenfunction form", ClosedForm::alpha_exponential(), t, alpha);
  }

  // the eigenfunction reproduces itself under the derivative
  for (int i = 0; i < 50; ++i) {
    const FractionalOrder alpha{alu(rng)};
    const double t = tu(rng);
    const ScalarFn f = ScalarFn::of_closed(ClosedForm::alpha_exponential(), alpha);
    const double want = f(t);
    const double got = conf_deriv_numeric(f, t, alpha);
    const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
    c.expect(err <= 1e-6, "eigenfunction identity: relative error " + num(err) + " > 1e-6");
  }
}

// 6. The derivative inverts the weighted integral: for 30 random polynomials
//    of degree <= 4, max over an interior grid of |T(I f) - f| <= 1e-5.
void c6_inverse_property(Check& c) {
  std::mt19937 rng(606);
  std::uniform_real_distribution<double> au(0.5, 1.5), wu(0.5, 2.0), alu(0.1, 1.0),
      cu(-3.0, 3.0);
  QuadratureConfig quad;
  quad.abs_tol = 1e-12;
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const FractionalOrder alpha{alu(rng)};
    const double a = au(rng);
    const double b = a + wu(rng);
    const ScalarFn f = poly_fn({cu(rng), cu(rng), cu(rng), cu(rng), cu(rng)});
    const ScalarFn F = ScalarFn::of_t(
        [&f, a, alpha, &quad](double t) { return conf_integral(f, a, t, alpha, quad); });
    const auto grid = uniform_grid(a, b, 21);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double t = grid[i];
      worst = std::max(worst, std::abs(conf_deriv_numeric(F, t, alpha, 1e-4) - f(t)));
    }
  }
  c.expect(worst <= 1e-5, "worst inversion error " + num(worst) + " > 1e-5");
}

// 7. Integral triangle inequality and the modulus derivative identity on
//    1000 random instances each; truncation equals clamping on 1e5 triples.
void c7_inequalities(Check& c) {
  std::mt19937 rng(707);

  std::uniform_real_distribution<double> au(0.3, 1.5), wu(0.2, 1.5), alu(0.1, 1.0),
      cu(-2.0, 2.0);
  QuadratureConfig quad;
  quad.abs_tol = 1e-9;
  for (int trial = 0; trial < 1000; ++trial) {
    const FractionalOrder alpha{alu(rng)};
    const double a = au(rng);
    const double t = a + wu(rng);
    const ScalarFn f = poly_fn({cu(rng), cu(rng), cu(rng), cu(rng)});
    const ScalarFn abs_f = ScalarFn::of_t([&f](double s) { return std::abs(f(s)); });
    const double lhs = std::abs(conf_integral(f, a, t, alpha, quad));
    const double rhs = conf_integral(abs_f, a, t, alpha, quad);
    c.expect(lhs <= rhs + 1e-6,
             "triangle inequality violated by " + num(lhs - rhs) + " > 1e-6");
  }

  std::uniform_real_distribution<double> qu(-1.5, 1.5), tu(0.5, 2.5);
  std::bernoulli_distribution flip;
  for (int trial = 0; trial < 1000; ++trial) {
    const FractionalOrder alpha{alu(rng)};
    const double t = tu(rng);
    const double s = flip(rng) ? 1.0 : -1.0;
    const double q0 = qu(rng), q1 = qu(rng), q2 = qu(rng);
    // s * (q(t)^2 + 1/4) is smooth, sign-definite and bounded away from zero
    const auto x_of = [s, q0, q1, q2](double u) {
      const double q = q0 + u * (q1 + u * q2);
      return s * (q * q + 0.25);
    };
    const ScalarFn x_fn = ScalarFn::of_t(x_of);
    const ScalarFn abs_x = ScalarFn::of_t([x_of](double u) { return std::abs(x_of(u)); });
    const double lhs = conf_deriv_numeric(abs_x, t, alpha);
    const double rhs = modulus_deriv(x_of(t), conf_deriv_numeric(x_fn, t, alpha));
    const double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    c.expect(err <= 1e-6, "modulus identity off by " + num(err) + " > 1e-6");
  }

  std::uniform_real_distribution<double> xu(-10.0, 10.0), vu(-5.0, 5.0), mu(0.0, 5.0);
  for (int trial = 0; trial < 100000; ++trial) {
    const double x = xu(rng), v = vu(rng), M = mu(rng);
    if (truncate(x, v, M) != std::clamp(x, v - M, v + M)) {
      c.expect(false, "truncation differs from clamping at x=" + num(x) + ", v=" + num(v) +
                          ", M=" + num(M));
      return;
    }
  }
}

// 8. Certificate corpus: every shipped problem with a [tube] section passes
//    the sampled verification, and the delivered trajectory (fixed point or
//    oracle fallback) stays in the tube with tol 1e-6. One entry has a
//    radius that vanishes on an inner stretch where the center is an exact
//    solution.
void c8_certificate_corpus(Check& c) {
  const char* names[] = {"paper-example", "paper-variant",  "cubic-decay",
                         "relaxed-approach", "linear-forced", "tube-shrinking"};
  bool saw_vanishing_radius = false;
  for (const char* name : names) {
    const std::string label(name);
    const ProblemFile pf =
        load_problem(std::string(CONFRACT_PROBLEMS_DIR) + "/" + label + ".problem");
    c.expect(pf.has_tube(), label + ": no [tube] section");
    if (!pf.has_tube()) continue;

    const TubeCertificate cert = pf.to_certificate();
    const TubeReport rep = verify_tube(cert, pf.to_ivp(), pf.verify_samples, pf.verify_tol);
    c.expect(rep.tube_solution(), label + ": certificate rejected");
    if (rep.zero_radius_samples > 0) saw_vanishing_radius = true;

    std::ostringstream diag;
    const Trajectory traj = cli::detail::solve_problem(pf, nullptr, diag);
    const auto [inside, worst] = membership(traj, cert, 1e-6);
    c.expect(inside, label + ": delivered trajectory leaves the tube by " + num(worst));
  }
  c.expect(saw_vanishing_radius, "no corpus entry exercises a vanishing radius");
}

}  // namespace

int main() {
  int failures = 0;
  failures += !criterion(1, "cubic-exponential model, zero start: certificate + zero trajectory",
                         1.0, c1_zero_start);
  failures += !criterion(2, "cubic-exponential model, perturbed starts stay bounded", 5.0,
                         c2_perturbed_starts);
  failures += !criterion(3, "constant-coefficient closed form matches the oracle", 1.0,
                         c3_constant_coefficient);
  failures += !criterion(4, "general linear solver reduces to the constant-coefficient one",
                         10.0, c4_general_vs_special);
  failures += !criterion(5, "derivative closed forms and the eigenfunction identity", 1.0,
                         c5_closed_forms);
  failures += !criterion(6, "derivative inverts the weighted integral", 5.0,
                         c6_inverse_property);
  failures += !criterion(7, "triangle inequality, modulus identity, truncation = clamping",
                         0.0, c7_inequalities);
  failures += !criterion(8, "certificate corpus delivers in-tube trajectories", 0.0,
                         c8_certificate_corpus);
  if (failures) std::printf("%d of 8 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
