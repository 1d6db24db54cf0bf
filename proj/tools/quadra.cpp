#include <quadra/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

int emit(const quadra::cli::Outcome& o) {
  std::cout << o.out;
  std::cerr << o.err;
  return o.code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace quadra::cli;
  CLI::App app{"Minimal quadrature rules with prescribed nodes from truncated moment data"};
  app.require_subcommand(1);

  std::string solve_path;
  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "decide existence of the minimal rule containing the prescribed nodes");
  solve->add_option("file", solve_path, "instance JSON, or a directory of them")->required();
  solve->add_flag("--allow-infinity", solve_opt.allow_infinity, "admit the evaluation at infinity as an atom");
  solve->add_flag("--float", solve_opt.force_float, "run the binary64 pipeline instead of exact rationals");
  solve->add_option("--jobs", solve_opt.jobs, "worker threads for a directory")->check(CLI::PositiveNumber);

  std::string tmp_path;
  std::optional<std::string> next_odd;
  auto* tmp = app.add_subcommand("tmp", "truncated Hamburger moment problem for an even-degree sequence");
  tmp->add_option("file", tmp_path, "instance JSON")->required();
  tmp->add_option("--next-odd", next_odd, "odd moment used to flat-extend a nonsingular sequence");

  std::string measure_path, instance_path;
  double tol = 1e-6;
  auto* verify = app.add_subcommand("verify", "compare the moments of a measure with an instance");
  verify->add_option("measure", measure_path, "measure JSON (nodes, weights); a solve report also works")->required();
  verify->add_option("instance", instance_path, "instance JSON")->required();
  verify->add_option("--tol", tol, "relative tolerance for float comparisons");

  GenOptions gen_opt;
  std::string out_dir = ".";
  auto* gen = app.add_subcommand("gen", "write seeded random instances and their generating measures");
  gen->add_option("--atoms", gen_opt.spec.atom_count, "atoms, including the infinity atom if any");
  gen->add_option("--prescribe", gen_opt.spec.prescribe, "how many of the real atoms are prescribed");
  gen->add_flag("--include-infinity", gen_opt.spec.include_infinity, "add an atom at infinity");
  gen->add_option("--seed", gen_opt.spec.seed, "seed of the first instance");
  gen->add_option("--count", gen_opt.count, "number of instances (consecutive seeds)");
  gen->add_option("--lo", gen_opt.spec.atom_lo, "lower end of the atom range");
  gen->add_option("--hi", gen_opt.spec.atom_hi, "upper end of the atom range");
  gen->add_option("--out", out_dir, "output directory");
  gen->add_option("--jobs", gen_opt.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : InvalidInput;
  }

  if (*solve) return emit(cmd_solve(solve_path, solve_opt));
  if (*tmp) return emit(cmd_tmp(tmp_path, next_odd));
  if (*verify) return emit(cmd_verify(measure_path, instance_path, tol));
  gen_opt.out = out_dir;
  return emit(cmd_gen(gen_opt));
}
