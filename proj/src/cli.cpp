#include "conediff/cli.hpp"

#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "conediff/derivative.hpp"
#include "conediff/generate.hpp"
#include "conediff/io.hpp"
#include "conediff/solver.hpp"

namespace conediff::cli {
namespace {

using io::Json;

struct SolveOptions {
  double tol = 1e-8;
  int max_iters = 100000;
  int refine = 2;
  std::string solver = "lsqr";
  std::string solution_path;
};

struct GenOptions {
  std::string kind;
  int n = 0;
  int m = 0;
  int p = 0;
  int side = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  bool dry_run = false;
};

// Thrown to leave a command with a specific exit code.
struct Exit {
  int code;
};

void add_solve_flags(CLI::App* cmd, SolveOptions& opts) {
  cmd->add_option("--tol", opts.tol, "KKT tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", opts.max_iters, "solver iteration limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--refine", opts.refine, "refinement steps")
      ->check(CLI::Range(0, 2));
}

void add_derivative_flags(CLI::App* cmd, SolveOptions& opts) {
  add_solve_flags(cmd, opts);
  cmd->add_option("--solver", opts.solver, "linear solver for M systems")
      ->check(CLI::IsMember({"lsqr", "dense"}));
  cmd->add_option("--solution", opts.solution_path,
                  "use this solution file instead of solving");
}

SolverConfig solver_config(const SolveOptions& opts) {
  SolverConfig cfg;
  cfg.tolerance = opts.tol;
  cfg.max_iterations = opts.max_iters;
  cfg.refine_steps = opts.refine;
  return cfg;
}

LinearSolverKind solver_kind(const SolveOptions& opts) {
  return opts.solver == "dense" ? LinearSolverKind::Dense
                                : LinearSolverKind::Lsqr;
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved:
      return kOk;
    case SolveStatus::MaxIters:
      return kMaxIters;
    case SolveStatus::InfeasibleOrUnbounded:
      return kInfeasible;
  }
  return kInputError;
}

Solution obtain_solution(const ConeProgramData& data, const SolveOptions& opts,
                         std::ostream& err) {
  if (!opts.solution_path.empty()) {
    const SolutionTriple t = io::solution_triple_from_json(
        io::read_json_file(opts.solution_path), data);
    return accept_solution(data, t.x, t.y, t.s, opts.tol);
  }
  Solution sol = solve(data, solver_config(opts));
  if (sol.status != SolveStatus::Solved) {
    err << "solve did not certify a solution (status "
        << to_string(sol.status) << ")\n";
    throw Exit{exit_code_for(sol.status)};
  }
  return sol;
}

Json warnings_json(const DerivativeHandle& handle, const LinearSolveInfo& info) {
  Json warnings = handle.warnings();
  if (!info.converged) {
    warnings.push_back("linear solve hit its iteration limit");
  }
  return warnings;
}

Json solve_info_json(const LinearSolveInfo& info) {
  return Json{{"iterations", info.iterations},
              {"residual_norm", info.residual_norm},
              {"converged", info.converged}};
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int cmd_solve(const std::string& problem, const SolveOptions& opts,
              std::ostream& out) {
  const ConeProgramData data =
      io::problem_from_json(io::read_json_file(problem));
  const Solution sol = solve(data, solver_config(opts));
  emit(out, io::solution_to_json(sol));
  return exit_code_for(sol.status);
}

int cmd_derivative(const std::string& problem, const std::string& pert,
                   const SolveOptions& opts, std::ostream& out,
                   std::ostream& err) {
  const ConeProgramData data =
      io::problem_from_json(io::read_json_file(problem));
  const ProgramPerturbation p =
      io::program_perturbation_from_json(io::read_json_file(pert), data);
  Solution sol = obtain_solution(data, opts, err);
  const DerivativeHandle handle(data, std::move(sol), solver_kind(opts));
  LinearSolveInfo info;
  const SolutionPerturbation d = handle.apply_derivative(p, &info);
  Json result = io::solution_perturbation_to_json(d);
  result["warnings"] = warnings_json(handle, info);
  result["linear_solve"] = solve_info_json(info);
  emit(out, result);
  return kOk;
}

int cmd_adjoint(const std::string& problem, const std::string& pert,
                const SolveOptions& opts, std::ostream& out,
                std::ostream& err) {
  const ConeProgramData data =
      io::problem_from_json(io::read_json_file(problem));
  const SolutionPerturbation q =
      io::solution_perturbation_from_json(io::read_json_file(pert), data);
  Solution sol = obtain_solution(data, opts, err);
  const DerivativeHandle handle(data, std::move(sol), solver_kind(opts));
  LinearSolveInfo info;
  const ProgramPerturbation g = handle.apply_adjoint_derivative(q, &info);
  Json result = io::program_perturbation_to_json(g, data);
  result["warnings"] = warnings_json(handle, info);
  result["linear_solve"] = solve_info_json(info);
  emit(out, result);
  return kOk;
}

int cmd_check(const std::string& problem, const SolveOptions& opts,
              int samples, double step, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
  const ConeProgramData data =
      io::problem_from_json(io::read_json_file(problem));
  Solution sol = obtain_solution(data, opts, err);
  const DerivativeHandle handle(data, std::move(sol), solver_kind(opts));
  const GradientCheckReport report =
      gradient_check(handle, solver_config(opts), samples, step, seed);
  Json result = io::report_to_json(report);
  result["solver"] = opts.solver;
  result["warnings"] = handle.warnings();
  emit(out, result);
  return kOk;
}

int cmd_gen(const GenOptions& g, std::ostream& out, std::ostream& err) {
  auto need = [](int value, const char* flag) {
    if (value < 1) {
      throw InputError(std::string(flag) + " must be given and >= 1");
    }
  };
  Json summary{{"kind", g.kind}, {"seed", g.seed}};
  if (g.kind == "sdp") {
    need(g.p, "--p");
    need(g.side, "--side");
    const ProblemDimensions dims = sdp_dimensions(g.p, g.side);
    summary["p"] = g.p;
    summary["side"] = g.side;
    summary["m"] = dims.m;
    summary["n"] = dims.n;
    summary["N"] = dims.N;
    summary["nnz_A"] = dims.nnz_A;
    summary["constraint_coefficients"] = dims.constraint_coefficients;
  } else {
    need(g.n, "--n");
    need(g.m, "--m");
  }
  if (g.dry_run) {
    if (g.kind != "sdp") {
      summary["m"] = g.m;
      summary["n"] = g.n;
      summary["N"] = g.m + g.n + 1;
    }
    emit(out, summary);
    return kOk;
  }

  ConeProgramData data;
  if (g.kind == "lp") {
    data = generate_lp(g.n, g.m, g.seed);
  } else if (g.kind == "socp") {
    data = generate_socp(g.n, g.m, g.seed);
  } else {
    data = generate_sdp(g.p, g.side, g.seed);
  }
  Json problem = io::problem_to_json(data);
  problem["kind"] = g.kind;
  problem["seed"] = g.seed;
  if (g.kind == "sdp") {
    problem["p"] = g.p;
    problem["side"] = g.side;
    problem["format"] = std::string(kPsdFormatNote);
  }
  summary["m"] = data.m();
  summary["n"] = data.n();
  summary["N"] = data.N();
  summary["nnz_A"] = data.A().nnz();

  if (g.out_path.empty()) {
    emit(out, problem);
  } else {
    std::ofstream file(g.out_path);
    if (!file) throw InputError("cannot write " + g.out_path);
    file << problem.dump() << "\n";
    emit(out, summary);
  }
  err << summary.dump() << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Solve cone programs and differentiate their solution map"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  std::string problem_path;
  std::string pert_path;
  int samples = 10;
  double step = 1e-6;
  std::uint64_t seed = 0;
  GenOptions gen;

  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  solve_cmd->add_option("problem", problem_path, "problem JSON")->required();
  add_solve_flags(solve_cmd, solve_opts);

  auto* deriv_cmd =
      app.add_subcommand("derivative", "apply the derivative to (dA, db, dc)");
  deriv_cmd->add_option("problem", problem_path, "problem JSON")->required();
  deriv_cmd->add_option("perturbation", pert_path, "perturbation JSON")
      ->required();
  add_derivative_flags(deriv_cmd, solve_opts);

  auto* adj_cmd = app.add_subcommand(
      "adjoint", "apply the adjoint of the derivative to (dx, dy, ds)");
  adj_cmd->add_option("problem", problem_path, "problem JSON")->required();
  adj_cmd->add_option("perturbation", pert_path, "solution perturbation JSON")
      ->required();
  add_derivative_flags(adj_cmd, solve_opts);

  auto* check_cmd = app.add_subcommand(
      "check", "compare the derivative with finite differences");
  check_cmd->add_option("problem", problem_path, "problem JSON")->required();
  add_derivative_flags(check_cmd, solve_opts);
  check_cmd->add_option("--samples", samples, "data coordinates to sample")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--step", step, "finite-difference step")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--seed", seed, "sampling seed");

  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("kind", gen.kind, "lp, socp or sdp")
      ->required()
      ->check(CLI::IsMember({"lp", "socp", "sdp"}));
  gen_cmd->add_option("--n", gen.n, "variables (lp, socp)");
  gen_cmd->add_option("--m", gen.m, "constraint rows (lp, socp)");
  gen_cmd->add_option("--p", gen.p, "trace constraints (sdp)");
  gen_cmd->add_option("--side", gen.side, "matrix side length (sdp)");
  gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out_path, "write the problem here");
  gen_cmd->add_flag("--dry-run", gen.dry_run, "report sizes only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  // The check command defaults to a tighter solve than the others, since the
  // finite differences divide solver error by the step.
  if (check_cmd->parsed() && check_cmd->count("--tol") == 0) {
    solve_opts.tol = 1e-10;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(problem_path, solve_opts, out);
    if (deriv_cmd->parsed()) {
      return cmd_derivative(problem_path, pert_path, solve_opts, out, err);
    }
    if (adj_cmd->parsed()) {
      return cmd_adjoint(problem_path, pert_path, solve_opts, out, err);
    }
    if (check_cmd->parsed()) {
      return cmd_check(problem_path, solve_opts, samples, step, seed, out,
                       err);
    }
    return cmd_gen(gen, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const KktViolation& e) {
    err << "solution rejected: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace conediff::cli
