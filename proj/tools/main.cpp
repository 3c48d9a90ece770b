#include <optional>
#include <string>

#include <CLI11.hpp>

#include "confract/cli.hpp"

namespace {

struct CommonOpts {
  std::string problem;
  std::string out;
  std::optional<std::size_t> grid_n;
  std::optional<double> tol;
  std::string format = "kv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--problem", o.problem, "problem file to load")->required();
  cmd->add_option("--out", o.out, "output file (trajectory CSV or report)")->required();
  cmd->add_option("--grid-n", o.grid_n,
                  "override the grid size (solve/oracle/compare) or sample count (verify-tube)");
  cmd->add_option("--tol", o.tol,
                  "override the tolerance: fixed-point tolerance for solve, verification "
                  "tolerance for verify-tube, membership tolerance for compare");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"csv", "kv"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "confract: conformable fractional calculus toolkit.\n"
      "Solves conformable initial value problems x^(alpha) = f(t, x) on [a, b] with a > 0,\n"
      "checks tube certificates (v, M) that guarantee a solution with |x - v| <= M, and\n"
      "cross-checks everything against a classical Runge-Kutta reference."};
  app.require_subcommand(1);

  CommonOpts solve_o, verify_o, oracle_o, compare_o;
  CLI::App* solve = app.add_subcommand("solve", "solve the problem, write a t,x trajectory CSV");
  add_common(solve, solve_o);
  CLI::App* verify =
      app.add_subcommand("verify-tube", "check the certificate conditions, write a report");
  add_common(verify, verify_o);
  CLI::App* oracle = app.add_subcommand(
      "oracle", "solve the transformed classical equation x' = t^(alpha-1) f with RK4");
  add_common(oracle, oracle_o);
  CLI::App* compare = app.add_subcommand(
      "compare", "solve and run the oracle, write both trajectories and their distance");
  add_common(compare, compare_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : confract::cli::exit_code::kValidation;
  }

  confract::cli::RunOptions opt;
  const CommonOpts* o = nullptr;
  if (app.got_subcommand(solve)) {
    opt.command = confract::cli::Command::Solve;
    o = &solve_o;
  } else if (app.got_subcommand(verify)) {
    opt.command = confract::cli::Command::VerifyTube;
    o = &verify_o;
  } else if (app.got_subcommand(oracle)) {
    opt.command = confract::cli::Command::Oracle;
    o = &oracle_o;
  } else {
    opt.command = confract::cli::Command::Compare;
    o = &compare_o;
  }
  opt.problem_path = o->problem;
  opt.out_path = o->out;
  opt.grid_n = o->grid_n;
  opt.tol = o->tol;
  opt.csv_reports = o->format == "csv";
  return confract::cli::run(opt);
}
