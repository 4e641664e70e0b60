#include "charcauchy/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"

namespace charcauchy {

const char* path_name(SolvePath p) {
  switch (p) {
    case SolvePath::rendall: return "rendall";
    case SolvePath::representation: return "representation";
    case SolvePath::final_formula: return "final_formula";
  }
  return "?";
}

DataReport validate_data(const CharacteristicDatum& f, const Inhomogeneity& F,
                         const SlabGrid& grid, int jet_order) {
  DataReport rep;
  rep.f_lo = f.v_a;
  rep.f_hi = f.v_b;
  const double tol = 1e-12;

  double fmax = 0.0;
  for (double x : f.f) fmax = std::max(fmax, std::fabs(x));
  for (int j = 0; j < grid.nv; ++j) {
    const double v = grid.v(j);
    if ((v < f.v_a || v > f.v_b) && std::fabs(f.f[j]) > tol * (1.0 + fmax)) {
      rep.ok = false;
      rep.failures.push_back("datum not supported in the declared interval");
      break;
    }
  }
  if (f.v_a < grid.v_min || f.v_b > grid.v_max()) {
    rep.ok = false;
    rep.failures.push_back("datum support leaves the grid v range");
  }

  if (!F.zero) {
    double Fmax = 0.0;
    for (int i = 0; i < grid.nu; ++i)
      for (int j = 0; j < grid.nv; ++j)
        Fmax = std::max(Fmax, std::fabs(F.F(grid.u(i), grid.v(j))));
    bool outside_J = false, outside_bounds = false;
    for (int i = 0; i < grid.nu && !(outside_J && outside_bounds); ++i) {
      for (int j = 0; j < grid.nv; ++j) {
        const double u = grid.u(i);
        const double v = grid.v(j);
        const double x = std::fabs(F.F(u, v));
        if (x <= tol * (1.0 + Fmax)) continue;
        if (!classify(grid.spacetime, u, v, CausalRegion::J)) outside_J = true;
        if (v < F.v_lo || v > F.v_hi) outside_bounds = true;
      }
    }
    if (outside_J) {
      rep.ok = false;
      rep.failures.push_back("supp F not contained in J(N)");
    }
    if (outside_bounds) {
      rep.ok = false;
      rep.failures.push_back("F not supported in the declared v bounds");
    }

    // effective jet-support interval (the closure of the union of the
    // transverse jet supports on N)
    double lo = grid.v_max(), hi = grid.v_min;
    const int order = std::min(jet_order, F.F.jet_order);
    for (int j = 0; j < grid.nv; ++j) {
      const double v = grid.v(j);
      for (int r = 0; r <= order; ++r) {
        if (std::fabs(F.F.jet(r, v)) > tol * (1.0 + Fmax)) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          break;
        }
      }
    }
    if (lo <= hi) {
      rep.scrF_empty = false;
      rep.scrF_lo = lo;
      rep.scrF_hi = hi;
    }
  }
  return rep;
}

namespace {

void require_valid(const CharacteristicDatum& f, const Inhomogeneity& F,
                   const SlabGrid& grid, int jet_order) {
  const DataReport rep = validate_data(f, F, grid, jet_order);
  if (!rep.ok) {
    std::string msg = "invalid data:";
    for (const auto& s : rep.failures) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }
}

GridField sample_inhomogeneity(const Inhomogeneity& F, const SlabGrid& grid) {
  if (F.zero) return make_field(grid);
  return sample(grid, [&F](double u, double v) { return F.F(u, v); });
}

// merged = phi_plus on J+, phi_minus on J-, mean trace on N, 0 outside J(N)
void assemble_merge(MergedSolution& sol) {
  const SlabGrid& g = sol.phi_plus.grid;
  sol.merged = make_field(g);
  sol.trace.resize(g.nv);
  for (int j = 0; j < g.nv; ++j)
    sol.trace[j] =
        0.5 * (sol.phi_plus.at(g.i_zero, j) + sol.phi_minus.at(g.i_zero, j));
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      const double u = g.u(i);
      const double v = g.v(j);
      if (i == g.i_zero) {
        sol.merged.at(i, j) = sol.trace[j];
      } else if (u > 0.0 && classify(g.spacetime, u, v, CausalRegion::Jplus)) {
        sol.merged.at(i, j) = sol.phi_plus.at(i, j);
      } else if (u < 0.0 && classify(g.spacetime, u, v, CausalRegion::Jminus)) {
        sol.merged.at(i, j) = sol.phi_minus.at(i, j);
      }
    }
  }
}

std::vector<double> fd_jump_report(const MergedSolution& sol) {
  std::vector<double> delta(2, 0.0);
  const SlabGrid& g = sol.merged.grid;
  const int i0 = g.i_zero;
  if (i0 < 2 || i0 + 2 >= g.nu)
    throw std::invalid_argument(
        "grid too narrow to measure transverse jumps (need u_halfwidth >= 2h)");
  for (int j = 0; j < g.nv; ++j) {
    delta[0] = std::max(delta[0], std::fabs(sol.phi_plus.at(i0, j) -
                                            sol.phi_minus.at(i0, j)));
  }
  double d1 = 0.0;
  const SlabGrid& gg = g;
  for (int j = 0; j < gg.nv; ++j) {
    const double above = (-3.0 * sol.phi_plus.at(i0, j) +
                          4.0 * sol.phi_plus.at(i0 + 1, j) -
                          sol.phi_plus.at(i0 + 2, j)) /
                         (2.0 * gg.h);
    const double below = (3.0 * sol.phi_minus.at(i0, j) -
                          4.0 * sol.phi_minus.at(i0 - 1, j) +
                          sol.phi_minus.at(i0 - 2, j)) /
                         (2.0 * gg.h);
    d1 = std::max(d1, std::fabs(above - below));
  }
  delta[1] = d1;
  return delta;
}

}  // namespace

MergedSolution solve_rendall(const WaveOperator& op,
                             const CharacteristicDatum& f,
                             const Inhomogeneity& F, const SolverConfig& cfg,
                             const SlabGrid& grid) {
  require_valid(f, F, grid, cfg.n_jet);

  const JetSequence jets_fut =
      solve_propagation(op, f, F, JetType::future, cfg.n_jet, grid, cfg.margin_steps);
  const JetSequence jets_past =
      solve_propagation(op, f, F, JetType::past, cfg.n_jet, grid, cfg.margin_steps);

  ExtensionConfig ext;
  ext.delta = cfg.delta;
  ext.mu_rule = cfg.mu_rule;
  ext.n_jet = cfg.n_jet;
  ext.sigma_profile = cfg.sigma_profile;

  const GridField app_plus = borel_extend(jets_fut, ext, grid);
  const GridField app_minus = borel_extend(jets_past, ext, grid);
  const GridField F_field = sample_inhomogeneity(F, grid);

  // e± = 1± [P phi_app± - F]; the indicator acts at cell centres inside the
  // Green solves, so each side sees a one-sidedly smooth source.
  GridField res_plus = apply_P(op, app_plus);
  GridField res_minus = apply_P(op, app_minus);
  for (std::size_t k = 0; k < res_plus.a.size(); ++k) {
    res_plus.a[k] -= F_field.a[k];
    res_minus.a[k] -= F_field.a[k];
  }

  const GridField corr_plus = retarded_solve(op, res_plus, CausalRegion::Jplus);
  const GridField corr_minus = advanced_solve(op, res_minus, CausalRegion::Jminus);

  MergedSolution sol;
  sol.path = SolvePath::rendall;
  sol.phi_plus = app_plus;
  sol.phi_minus = app_minus;
  for (std::size_t k = 0; k < sol.phi_plus.a.size(); ++k) {
    sol.phi_plus.a[k] -= corr_plus.a[k];
    sol.phi_minus.a[k] -= corr_minus.a[k];
  }
  assemble_merge(sol);
  sol.jump_report = jump_table(jets_fut, jets_past);
  return sol;
}

MergedSolution solve_representation(const WaveOperator& op,
                                    const CharacteristicDatum& f,
                                    const Inhomogeneity& F,
                                    const SolverConfig& cfg,
                                    const SlabGrid& grid) {
  require_valid(f, F, grid, cfg.n_jet);

  ExtensionConfig ext;
  ext.delta = cfg.delta_e > 0.0 ? cfg.delta_e : cfg.delta;
  const double delta_e = ext.effective_delta(grid);
  const GridField ef = simple_extension(f, delta_e, grid, cfg.sigma_profile);

  GridField residual = apply_P(op, ef);
  if (!F.zero) {
    const GridField F_field = sample_inhomogeneity(F, grid);
    for (std::size_t k = 0; k < residual.a.size(); ++k)
      residual.a[k] -= F_field.a[k];
  }

  const GridField corr_plus = retarded_solve(op, residual, CausalRegion::Jplus);
  const GridField corr_minus = advanced_solve(op, residual, CausalRegion::Jminus);

  MergedSolution sol;
  sol.path = SolvePath::representation;
  sol.phi_plus = ef;
  sol.phi_minus = ef;
  for (std::size_t k = 0; k < sol.phi_plus.a.size(); ++k) {
    const double corr = corr_plus.a[k] + corr_minus.a[k];
    sol.phi_plus.a[k] -= corr;
    sol.phi_minus.a[k] -= corr;
  }
  assemble_merge(sol);
  sol.jump_report = fd_jump_report(sol);
  return sol;
}

MergedSolution solve_final_formula(const WaveOperator& op,
                                   const CharacteristicDatum& f,
                                   const SolverConfig& cfg,
                                   const SlabGrid& grid) {
  require_valid(f, Inhomogeneity::none(), grid, cfg.n_jet);

  // T f = {2 n# f + [n(X) + div_{iota mu} n#] f} iota_n mu_g with n = du:
  // weight (1/2)(4 f' + [A + theta] f) in |dv|
  const std::vector<double> df = derivative_samples(f.f, grid.h);
  const std::vector<double> theta = slab_line_expansion_term(grid);
  SingleLayer layer;
  layer.weight.resize(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    const double v = grid.v(j);
    layer.weight[j] = grid.spacetime.density_weight(0.0, v) *
                      (4.0 * df[j] + (op.A(0.0, v) + theta[j]) * f.f[j]);
  }

  const SingleLayerParts parts = solve_single_layer_parts(op, layer, grid);

  MergedSolution sol;
  sol.path = SolvePath::final_formula;
  // G = G+ - G-; the one-sided fields keep their own N limits
  sol.phi_plus = parts.retarded;
  sol.phi_minus = make_field(grid);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j)
      sol.phi_minus.at(i, j) = -parts.advanced.at(i, j);
  assemble_merge(sol);
  sol.jump_report = fd_jump_report(sol);
  return sol;
}

MergedSolution solve_path(SolvePath path, const WaveOperator& op,
                          const CharacteristicDatum& f, const Inhomogeneity& F,
                          const SolverConfig& cfg, const SlabGrid& grid) {
  switch (path) {
    case SolvePath::rendall: return solve_rendall(op, f, F, cfg, grid);
    case SolvePath::representation:
      return solve_representation(op, f, F, cfg, grid);
    case SolvePath::final_formula:
      if (!F.zero)
        throw std::invalid_argument(
            "final_formula path applies to homogeneous problems only (F = 0)");
      return solve_final_formula(op, f, cfg, grid);
  }
  throw std::logic_error("unreachable");
}

RegularityReport regularity_report(const MergedSolution& sol,
                                   const JetSequence& jets_future,
                                   const JetSequence& jets_past,
                                   double data_scale) {
  RegularityReport rep;
  rep.jump_table = jump_table(jets_future, jets_past);
  const double h = sol.merged.grid.h;
  rep.tol = 10.0 * h * h * (1.0 + data_scale);
  int k = 0;
  while (k + 1 < static_cast<int>(rep.jump_table.size()) &&
         rep.jump_table[k + 1] <= rep.tol)
    ++k;
  rep.c_k_class = k;
  return rep;
}

std::vector<double> measure_du_jump(const MergedSolution& sol) {
  const SlabGrid& g = sol.merged.grid;
  const int i0 = g.i_zero;
  if (i0 < 2 || i0 + 2 >= g.nu)
    throw std::invalid_argument(
        "grid too narrow to measure transverse jumps (need u_halfwidth >= 2h)");
  std::vector<double> jump(g.nv);
  for (int j = 0; j < g.nv; ++j) {
    const double above = (-3.0 * sol.phi_plus.at(i0, j) +
                          4.0 * sol.phi_plus.at(i0 + 1, j) -
                          sol.phi_plus.at(i0 + 2, j)) /
                         (2.0 * g.h);
    const double below = (3.0 * sol.phi_minus.at(i0, j) -
                          4.0 * sol.phi_minus.at(i0 - 1, j) +
                          sol.phi_minus.at(i0 - 2, j)) /
                         (2.0 * g.h);
    jump[j] = above - below;
  }
  return jump;
}

double merged_distance(const MergedSolution& a, const MergedSolution& b) {
  return max_abs_diff(a.merged, b.merged);
}

}  // namespace charcauchy
