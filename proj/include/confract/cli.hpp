#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "confract/io.hpp"
#include "confract/linear.hpp"
#include "confract/problem.hpp"
#include "confract/solver.hpp"
#include "confract/tube.hpp"

namespace confract::cli {

enum class Command { Solve, VerifyTube, Oracle, Compare };

/// Process exit codes shared by the command-line tool and its tests.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;  // unreadable/invalid problem or options
inline constexpr int kVerifyFailed = 3;  // a tube condition is false
inline constexpr int kNumerics = 4;  // blow-up or quadrature failure
}  // namespace exit_code

struct RunOptions {
  Command command = Command::Solve;
  std::string problem_path;
  std::string out_path;
  std::optional<std::size_t> grid_n;  // overrides [solver] grid_n
  std::optional<double> tol;  // verify-tube: verification tol; solve: picard tol;
                              // compare: membership tol
  bool csv_reports = false;  // --format csv renders reports as key,value rows
};

namespace detail {

inline void write_report(KvWriter& kv, const TubeReport& report, double tol) {
  kv.put("tube_solution", report.tube_solution());
  kv.put("cond_i_ok", report.cond_i_ok);
  kv.put("cond_ii_ok", report.cond_ii_ok);
  kv.put("cond_iii_ok", report.cond_iii_ok);
  kv.put("worst_margin_i", report.worst_margin_i);
  kv.put("worst_margin_ii", report.worst_margin_ii);
  kv.put("worst_margin_iii", report.worst_margin_iii);
  kv.put("samples", report.samples);
  kv.put("zero_radius_samples", report.zero_radius_samples);
  kv.put("tol", tol);
  kv.put("witness_count", report.witnesses.size());
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    const std::string prefix = "witness_" + std::to_string(i + 1);
    kv.put(prefix + "_t", report.witnesses[i].t);
    kv.put(prefix + "_y", report.witnesses[i].y);
    kv.put(prefix + "_condition", static_cast<std::size_t>(report.witnesses[i].condition));
  }
}

inline const char* kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Nonlinear: return "nonlinear";
    case ProblemKind::LinearSpecial: return "linear-special";
    case ProblemKind::LinearGeneral: return "linear-general";
  }
  return "?";
}

inline Trajectory solve_problem(const ProblemFile& pf, SolveResult* picard_out,
                                std::ostream& diag) {
  switch (pf.kind) {
    case ProblemKind::LinearSpecial:
      return solve_linear_special(pf.g, pf.alpha, pf.interval, pf.x0, pf.solver.grid_n, pf.quad);
    case ProblemKind::LinearGeneral:
      return solve_linear_general(pf.to_linear(), pf.solver.grid_n, pf.quad);
    case ProblemKind::Nonlinear: {
      if (!pf.has_tube())
        throw std::invalid_argument(
            "nonlinear solve needs a [tube] section (the iteration works on the truncated "
            "problem)");
      SolveResult res = picard_solve(pf.to_ivp(), pf.to_certificate(), pf.solver, pf.quad);
      if (res.oracle_fallback)
        diag << "note: fixed-point iteration did not converge; emitting the truncated "
                "classical-oracle trajectory\n";
      if (picard_out) *picard_out = res;
      return res.trajectory;
    }
  }
  throw std::logic_error("solve_problem: unknown kind");
}

inline int run_solve(ProblemFile& pf, const RunOptions& opt, std::ostream& out,
                     std::ostream& report, std::ostream& diag) {
  if (opt.tol) pf.solver.picard_tol = *opt.tol;
  SolveResult res;
  const Trajectory traj = solve_problem(pf, &res, diag);
  write_trajectory_csv(out, traj);

  KvWriter kv(report, opt.csv_reports);
  kv.put("command", "solve");
  kv.put("kind", kind_name(pf.kind));
  kv.put("grid_n", traj.size());
  if (pf.kind == ProblemKind::Nonlinear) {
    kv.put("iterations", res.iterations);
    kv.put("converged", res.converged);
    kv.put("final_delta", res.final_delta);
    kv.put("oracle_fallback", res.oracle_fallback);
    kv.put("in_tube", res.in_tube);
    kv.put("tube_margin", res.tube_margin);
  } else {
    kv.put("residual", linear_residual(traj, pf.to_linear()));
    if (pf.has_tube()) {
      const auto [inside, worst] = membership(traj, pf.to_certificate(), 1e-9);
      kv.put("in_tube", inside);
      kv.put("tube_margin", worst);
    }
  }
  return exit_code::kOk;
}

inline int run_verify(const ProblemFile& pf, const RunOptions& opt, std::ostream& out,
                      std::ostream& diag) {
  if (!pf.has_tube())
    throw std::invalid_argument("verify-tube needs a [tube] section in the problem file");
  const double tol = opt.tol.value_or(pf.verify_tol);
  const std::size_t samples = opt.grid_n.value_or(pf.verify_samples);
  const TubeReport rep = verify_tube(pf.to_certificate(), pf.to_ivp(), samples, tol);

  KvWriter kv(out, opt.csv_reports);
  kv.put("command", "verify-tube");
  write_report(kv, rep, tol);
  if (!rep.tube_solution()) {
    diag << "verify-tube: certificate rejected (sampled check, " << samples << " points)\n";
    return exit_code::kVerifyFailed;
  }
  diag << "verify-tube: certificate accepted (sampled check, " << samples << " points)\n";
  return exit_code::kOk;
}

inline int run_oracle(const ProblemFile& pf, std::ostream& out, std::ostream& report,
                      const RunOptions& opt) {
  const Trajectory traj = transform_oracle(pf.to_ivp(), pf.solver.grid_n);
  write_trajectory_csv(out, traj);
  KvWriter kv(report, opt.csv_reports);
  kv.put("command", "oracle");
  kv.put("kind", kind_name(pf.kind));
  kv.put("grid_n", traj.size());
  return exit_code::kOk;
}

inline int run_compare(ProblemFile& pf, const RunOptions& opt, std::ostream& out,
                       std::ostream& report, std::ostream& diag) {
  SolveResult res;
  const Trajectory solved = solve_problem(pf, &res, diag);
  const Trajectory oracle = transform_oracle(pf.to_ivp(), pf.solver.grid_n);
  write_compare_csv(out, solved, oracle);

  KvWriter kv(report, opt.csv_reports);
  kv.put("command", "compare");
  kv.put("kind", kind_name(pf.kind));
  kv.put("grid_n", solved.size());
  kv.put("sup_distance", sup_distance(solved, oracle));
  if (pf.has_tube()) {
    const double tol = opt.tol.value_or(1e-6);
    const auto cert = pf.to_certificate();
    const auto [solver_in, solver_worst] = membership(solved, cert, tol);
    const auto [oracle_in, oracle_worst] = membership(oracle, cert, tol);
    kv.put("membership_tol", tol);
    kv.put("solver_in_tube", solver_in);
    kv.put("solver_tube_margin", solver_worst);
    kv.put("oracle_in_tube", oracle_in);
    kv.put("oracle_tube_margin", oracle_worst);
  }
  return exit_code::kOk;
}

}  // namespace detail

/// Executes one command against a problem file. Trajectory/report payloads
/// go to opt.out_path; a short machine-readable summary goes to `report`
/// (stdout in the tool); human diagnostics go to `diag` (stderr). Returns a
/// process exit code (see exit_code above); all failures are also described
/// on `diag`.
inline int run(const RunOptions& opt, std::ostream& report = std::cout,
               std::ostream& diag = std::cerr) {
  try {
    ProblemFile pf = load_problem(opt.problem_path);
    if (opt.grid_n) pf.solver.grid_n = *opt.grid_n;

    std::ofstream out(opt.out_path);
    if (!out) {
      diag << "error: cannot open output file: " << opt.out_path << '\n';
      return exit_code::kValidation;
    }

    switch (opt.command) {
      case Command::Solve: return detail::run_solve(pf, opt, out, report, diag);
      case Command::VerifyTube: return detail::run_verify(pf, opt, out, diag);
      case Command::Oracle: return detail::run_oracle(pf, out, report, opt);
      case Command::Compare: return detail::run_compare(pf, opt, out, report, diag);
    }
    diag << "error: unknown command\n";
    return exit_code::kValidation;
  } catch (const BlowUpError& e) {
    diag << "numerical failure: " << e.what() << '\n';
    return exit_code::kNumerics;
  } catch (const QuadratureError& e) {
    diag << "numerical failure: " << e.what() << '\n';
    return exit_code::kNumerics;
  } catch (const EvaluationError& e) {
    diag << "numerical failure: " << e.what() << '\n';
    return exit_code::kNumerics;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code::kValidation;
  }
}

}  // namespace confract::cli
