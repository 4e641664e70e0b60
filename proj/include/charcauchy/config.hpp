#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charcauchy/io.hpp"
#include "charcauchy/solver.hpp"
#include "charcauchy/verify.hpp"

namespace charcauchy {

// Thrown on malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // spacetime
  double t_min = 0.0, t_max = 1.0;
  MetricKind metric = MetricKind::minkowski;
  std::optional<Expr> omega;

  // grid
  double h = 0.1;
  double u_halfwidth = 1.0;
  double v_lo = 0.0, v_hi = 1.0;

  // operator coefficients (expressions in u, v)
  std::optional<Expr> A, B, q;

  // data
  std::optional<Expr> f_expr;
  double f_lo = 0.0, f_hi = 0.0;
  std::optional<Expr> F_expr;
  double F_lo = 0.0, F_hi = 0.0;

  // solver
  SolverConfig solver;
  std::vector<SolvePath> paths = {SolvePath::rendall};

  // verify
  std::uint64_t seed = 1;
  int battery_size = 20;
  double tol_factor = 10.0;    // residual tolerance = tol_factor * h^2 * norm
  std::vector<double> h_list;  // convergence levels

  // expansion runs
  std::vector<std::string> expansion_cases = {"flat_line", "lightcone",
                                              "conformal"};
  double conformal_lambda = 4.0;
  double geometric_fd_step = 1e-4;

  // converge runs
  std::string converge_problem = "kg_jump";
  std::string converge_path = "rendall";

  // output
  bool write_fields = true;

  static RunConfig from_json(const Json& j);
  static RunConfig load(const std::string& path);

  SlabSpacetime make_spacetime() const;
  SlabGrid make_grid() const;
  WaveOperator make_operator() const;
  CharacteristicDatum make_datum(const SlabGrid& grid) const;
  Inhomogeneity make_inhomogeneity() const;
};

SolvePath parse_path(const std::string& name);

}  // namespace charcauchy
