#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "charcauchy/run.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  double grid_h = 0.0;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to the JSON config")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--grid-h", args.grid_h, "override the grid spacing");
  cmd->add_option("--seed", args.seed, "override the battery seed");
}

charcauchy::RunConfig load(const CommonArgs& args) {
  charcauchy::RunConfig cfg = charcauchy::RunConfig::load(args.config_path);
  if (args.grid_h > 0.0) cfg.h = args.grid_h;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "charcauchy: two-sided characteristic Cauchy problems on a null slab "
      "grid, with expansion-density geometry checks"};
  app.require_subcommand(1);

  CommonArgs solve_args, verify_args, expansion_args, converge_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "solve a characteristic problem and write field + summary");
  add_common(solve, solve_args);
  CLI::App* verify = app.add_subcommand(
      "verify", "run the jump-formula / identity verification suite");
  add_common(verify, verify_args);
  CLI::App* expansion = app.add_subcommand(
      "expansion", "expansion-density runs (flat line, light cone, conformal)");
  add_common(expansion, expansion_args);
  CLI::App* converge =
      app.add_subcommand("converge", "grid-refinement convergence table");
  add_common(converge, converge_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return charcauchy::run_solve(load(solve_args), solve_args.out_dir);
    if (verify->parsed())
      return charcauchy::run_verify(load(verify_args), verify_args.out_dir);
    if (expansion->parsed())
      return charcauchy::run_expansion(load(expansion_args), expansion_args.out_dir);
    if (converge->parsed())
      return charcauchy::run_converge(load(converge_args), converge_args.out_dir);
  } catch (const charcauchy::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
