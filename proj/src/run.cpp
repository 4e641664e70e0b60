#include "charcauchy/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "charcauchy/numerics.hpp"

namespace charcauchy {

namespace {

double c2_norm_1d(const std::vector<double>& f, double h) {
  double m = 0.0;
  for (std::size_t j = 1; j + 1 < f.size(); ++j) {
    m = std::max(m, std::fabs(f[j]));
    m = std::max(m, std::fabs(f[j + 1] - f[j - 1]) / (2.0 * h));
    m = std::max(m, std::fabs(f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h));
  }
  return m;
}

// distributional residual against a battery: max over members of
// |<merged, P† chi mu> - <F, chi mu>| / ||chi||_C2
double distributional_residual(const WaveOperator& op,
                               const MergedSolution& sol,
                               const GridField& F_field,
                               const TestFunctionBattery& battery) {
  double r = 0.0;
  for (std::size_t m = 0; m < battery.members.size(); ++m) {
    const GridField& chi = battery.members[m];
    const GridField pd_chi = apply_P_adjoint(op, chi);
    const double lhs = pair_mu(sol.merged, pd_chi);
    const double rhs = pair_mu(F_field, chi);
    r = std::max(r, std::fabs(lhs - rhs) / (1.0 + battery.c2_norms[m]));
  }
  return r;
}

Json study_to_json(const ConvergenceStudy& study) {
  Json rows = Json::array();
  for (const auto& row : study.rows) {
    rows.push_back(Json{{"h", row.h},
                        {"error", row.error},
                        {"observed_order", row.observed_order}});
  }
  return Json{{"rows", rows}, {"monotone", study.monotone}};
}

}  // namespace

int run_solve(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const SlabGrid grid = cfg.make_grid();
  const WaveOperator op = cfg.make_operator();
  const CharacteristicDatum f = cfg.make_datum(grid);
  const Inhomogeneity F = cfg.make_inhomogeneity();

  const DataReport data = validate_data(f, F, grid, cfg.solver.n_jet);
  if (!data.ok) {
    Json bad{{"pass", false}, {"data_failures", data.failures}};
    write_json(out_dir + "/summary.json", bad);
    return 1;
  }

  std::vector<MergedSolution> sols;
  for (SolvePath p : cfg.paths)
    sols.push_back(solve_path(p, op, f, F, cfg.solver, grid));
  const MergedSolution& primary = sols.front();

  if (cfg.write_fields) {
    for (const MergedSolution& s : sols)
      write_field_csv(out_dir + "/solution_" + path_name(s.path) + ".csv",
                      s.merged);
  }

  double fmax = 0.0;
  for (double x : f.f) fmax = std::max(fmax, std::fabs(x));
  double trace_error = 0.0;
  for (int j = 0; j < grid.nv; ++j)
    trace_error = std::max(trace_error, std::fabs(primary.trace[j] - f.f[j]));

  const GridField F_field =
      F.zero ? make_field(grid)
             : sample(grid, [&F](double u, double v) { return F.F(u, v); });
  const TestFunctionBattery battery =
      TestFunctionBattery::make(grid, cfg.battery_size, cfg.seed);
  const double residual =
      distributional_residual(op, primary, F_field, battery);

  // regularity against the jet tower
  const JetSequence jets_fut = solve_propagation(
      op, f, F, JetType::future, cfg.solver.n_jet, grid, cfg.solver.margin_steps);
  const JetSequence jets_past = solve_propagation(
      op, f, F, JetType::past, cfg.solver.n_jet, grid, cfg.solver.margin_steps);
  const RegularityReport reg =
      regularity_report(primary, jets_fut, jets_past, fmax);

  Json agreement = Json::object();
  for (std::size_t a = 0; a + 1 < sols.size(); ++a)
    for (std::size_t b = a + 1; b < sols.size(); ++b)
      agreement[std::string(path_name(sols[a].path)) + "_vs_" +
                path_name(sols[b].path)] = merged_distance(sols[a], sols[b]);

  const double h2 = grid.h * grid.h;
  const double trace_tol = cfg.tol_factor * h2 * (1.0 + c2_norm_1d(f.f, grid.h));
  const double residual_tol = cfg.tol_factor * h2 * (1.0 + fmax);
  const bool pass = trace_error <= trace_tol && residual <= residual_tol;

  Json summary{{"grid", Json{{"h", grid.h}, {"nu", grid.nu}, {"nv", grid.nv}}},
               {"path", path_name(primary.path)},
               {"trace_error", trace_error},
               {"trace_tol", trace_tol},
               {"residual", residual},
               {"residual_tol", residual_tol},
               {"jump_table", primary.jump_report},
               {"C_k_class", reg.c_k_class},
               {"path_agreement", agreement},
               {"pass", pass}};
  write_json(out_dir + "/summary.json", summary);
  return pass ? 0 : 1;
}

int run_verify(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const SlabGrid grid = cfg.make_grid();
  const WaveOperator op = cfg.make_operator();
  const TestFunctionBattery battery =
      TestFunctionBattery::make(grid, cfg.battery_size, cfg.seed);
  const double h2 = grid.h * grid.h;
  double battery_scale = 0.0;
  for (double n : battery.c2_norms) battery_scale = std::max(battery_scale, n);

  Json checks = Json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double residual, double tol) {
    const bool pass = residual <= tol;
    all_pass = all_pass && pass;
    checks.push_back(Json{{"check", name},
                          {"residual", residual},
                          {"tolerance", tol},
                          {"pass", pass}});
  };

  // smooth field for the jump checks, generated from the same seed stream
  const TestFunctionBattery probe = TestFunctionBattery::make(grid, 1, cfg.seed + 17);
  const GridField& Phi = probe.members[0];
  const double phi_scale = 1.0 + probe.c2_norms[0];

  const double identity_scale = 1.0 + phi_scale + battery_scale;
  for (CausalRegion D : {CausalRegion::Jplus, CausalRegion::Jminus}) {
    const ResidualReport rep = verify_jump_formula(op, D, Phi, battery);
    record(std::string("jump_formula_") + region_name(D), rep.max_residual,
           cfg.tol_factor * h2 * identity_scale);
  }
  {
    const ResidualReport rep = verify_T_identity(op, Phi, battery);
    record("T_identity", rep.max_residual,
           cfg.tol_factor * h2 * identity_scale);
  }

  const CharacteristicDatum f = cfg.make_datum(grid);
  double fmax = 0.0;
  for (double x : f.f) fmax = std::max(fmax, std::fabs(x));
  if (fmax > 0.0) {
    const ResidualReport rep =
        verify_second_jump(op, f, battery, cfg.solver);
    record("second_jump", rep.max_residual,
           cfg.tol_factor * h2 * (1.0 + fmax) * (1.0 + battery_scale));
  }

  // equivariance needs tangent X; run the equality when A vanishes on N
  bool tangent = true;
  for (int j = 0; j < grid.nv && tangent; ++j)
    tangent = std::fabs(op.A(0.0, grid.v(j))) <= 1e-14;
  if (tangent) {
    std::vector<double> lambda(grid.nv, cfg.conformal_lambda);
    std::vector<double> phiN(grid.nv);
    const double mid = 0.5 * (grid.v_min + grid.v_max());
    const double width = 0.25 * (grid.v_max() - grid.v_min);
    for (int j = 0; j < grid.nv; ++j)
      phiN[j] = unit_bump((grid.v(j) - mid) / width);
    const EquivarianceReport rep =
        verify_equivariance(op, lambda, phiN, battery);
    record("equivariance", rep.max_rel_error, 1e-10);
  }

  if (fmax > 0.0) {
    std::vector<SolverConfig> variants;
    variants.push_back(cfg.solver);
    SolverConfig v1 = cfg.solver;
    v1.sigma_profile = 2;
    variants.push_back(v1);
    SolverConfig v2 = cfg.solver;
    v2.margin_steps = cfg.solver.margin_steps + 3;
    variants.push_back(v2);
    SolverConfig v3 = cfg.solver;
    v3.n_jet = std::max(3, cfg.solver.n_jet - 1);
    variants.push_back(v3);
    const Inhomogeneity F = cfg.make_inhomogeneity();
    const IndependenceReport rep =
        independence_suite(op, f, F, variants, grid);
    record("choice_independence", rep.max_distance,
           20.0 * (h2 + h2 * h2) * (1.0 + fmax));
  }

  Json report{{"seed", cfg.seed},
              {"battery_size", cfg.battery_size},
              {"grid", Json{{"h", grid.h}, {"nu", grid.nu}, {"nv", grid.nv}}},
              {"checks", checks},
              {"pass", all_pass}};
  write_json(out_dir + "/verify.json", report);
  return all_pass ? 0 : 1;
}

int run_expansion(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const SlabSpacetime st = cfg.make_spacetime();
  Json checks = Json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double value, double tol) {
    const bool pass = value <= tol;
    all_pass = all_pass && pass;
    checks.push_back(
        Json{{"check", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}});
  };
  std::ofstream csv(out_dir + "/expansion.csv");
  csv << "case,y_index,s,density\n";
  auto dump = [&csv](const std::string& name, const HypersurfaceParam& hs,
                     const DensityOnN& d) {
    for (int p = 0; p < d.ny; ++p)
      for (int k = 0; k < d.ns; ++k)
        csv << name << ',' << p << ',' << format_double(hs.s_samples[k]) << ','
            << format_double(d.at(p, k)) << '\n';
  };

  auto unit = [](double, std::span<const double>) { return 1.0; };

  for (const std::string& which : cfg.expansion_cases) {
    if (which == "flat_line") {
      const double margin = 0.05 * (cfg.v_hi - cfg.v_lo);
      HypersurfaceParam line = slab_null_line(st, cfg.v_lo + margin,
                                              cfg.v_hi - margin, 201);
      line.fd_step = cfg.geometric_fd_step;
      const DensityOnN base = expansion_density(line, unit);
      dump("flat_line", line, base);
      double m = 0.0;
      for (double x : base.weight) m = std::max(m, std::fabs(x));
      record("flat_line_zero", m, 1e-10);

      auto flip = [](double, std::span<const double>) { return -1.0; };
      auto grow = [](double s, std::span<const double>) { return std::exp(0.25 * s); };
      auto two = [](double, std::span<const double>) { return 2.0; };
      for (auto [name, fn, sign] :
           {std::tuple<const char*, double (*)(double, std::span<const double>),
                       double>{"alpha_two", two, 1.0},
            {"alpha_exp", grow, 1.0},
            {"alpha_flip", flip, -1.0}}) {
        const DensityOnN d = expansion_density(line, fn);
        double diff = 0.0;
        for (std::size_t k = 0; k < d.weight.size(); ++k)
          diff = std::max(diff, std::fabs(d.weight[k] - sign * base.weight[k]));
        record(std::string("flat_line_rescale_") + name, diff, 1e-8);
      }
    } else if (which == "lightcone") {
      const std::vector<std::vector<double>> dirs = {
          {1.0, 0.5}, {0.7, 2.0}, {2.0, 4.0}, {1.5707963267948966, 0.0}};
      HypersurfaceParam cone = minkowski_light_cone(1.0, 5.0, 401, dirs);
      cone.fd_step = cfg.geometric_fd_step;
      const DensityOnN area = adapted_weight(cone);
      const DensityOnN d = expansion_density(cone, unit);
      dump("lightcone", cone, d);
      double rel = 0.0;
      for (int p = 0; p < d.ny; ++p)
        for (int k = 0; k < d.ns; ++k) {
          const double expected = 2.0 / cone.s_samples[k];
          rel = std::max(rel, std::fabs(d.at(p, k) / area.at(p, k) - expected) /
                                  expected);
        }
      record("lightcone_ratio_2_over_r", rel, 1e-4);

      auto grow = [](double s, std::span<const double>) { return std::exp(0.25 * s); };
      const DensityOnN resc = expansion_density(cone, grow);
      double scale = 0.0, diff = 0.0;
      for (std::size_t k = 0; k < d.weight.size(); ++k) {
        scale = std::max(scale, std::fabs(d.weight[k]));
        diff = std::max(diff, std::fabs(resc.weight[k] - d.weight[k]));
      }
      record("lightcone_rescale_invariance", diff / scale, 1e-6);
    } else if (which == "conformal") {
      const double margin = 0.05 * (cfg.v_hi - cfg.v_lo);
      HypersurfaceParam line = slab_null_line(st, cfg.v_lo + margin,
                                              cfg.v_hi - margin, 201);
      line.fd_step = cfg.geometric_fd_step;
      auto lam = [&cfg](double, std::span<const double>) {
        return cfg.conformal_lambda;
      };
      const ConformalScalingReport flat = conformal_scaling_check(line, lam);
      record("conformal_flat_line", flat.max_rel_error, 1e-10);

      const std::vector<std::vector<double>> dirs = {{1.0, 0.5}, {2.0, 4.0}};
      HypersurfaceParam cone = minkowski_light_cone(1.0, 5.0, 401, dirs);
      cone.fd_step = cfg.geometric_fd_step;
      const ConformalScalingReport conf = conformal_scaling_check(cone, lam);
      record("conformal_lightcone", conf.max_rel_error, 1e-6);
    } else {
      throw ConfigError("unknown expansion case \"" + which + "\"");
    }
  }

  Json report{{"checks", checks}, {"pass", all_pass}};
  write_json(out_dir + "/expansion.json", report);
  return all_pass ? 0 : 1;
}

namespace {

struct BundledProblem {
  SlabSpacetime st;
  double u_halfwidth = 1.0;
  double v_lo = 0.0, v_hi = 1.0;
  WaveOperator op;
  Expr f_expr = Expr::parse("0");
  double f_lo = 0.0, f_hi = 0.0;
};

BundledProblem bundled_problem(const std::string& name) {
  BundledProblem p;
  p.st.t_min = -1.0;
  p.st.t_max = 5.0;
  p.u_halfwidth = 2.0;
  p.v_lo = 1.0;
  p.v_hi = 7.0;
  p.op = WaveOperator::box();
  p.f_expr = Expr::parse("bump(v,4,1.2)");
  p.f_lo = 2.8;
  p.f_hi = 5.2;
  if (name == "pure_wave") return p;
  if (name == "kg_jump") {
    p.op = WaveOperator::klein_gordon(1.0);
    return p;
  }
  throw ConfigError("unknown convergence problem \"" + name +
                    "\" (expected pure_wave | kg_jump)");
}

}  // namespace

double converge_error(const std::string& problem, SolvePath path, double h) {
  const BundledProblem p = bundled_problem(problem);
  const SlabGrid grid = build_grid(p.st, h, p.u_halfwidth, p.v_lo, p.v_hi);
  const Expr fe = p.f_expr;
  const CharacteristicDatum f = CharacteristicDatum::from_function(
      grid, [&fe](double v) { return fe(0.0, v); }, p.f_lo, p.f_hi);
  SolverConfig cfg;
  cfg.delta = 1.8;
  const MergedSolution sol =
      solve_path(path, p.op, f, Inhomogeneity::none(), cfg, grid);

  if (problem == "pure_wave") {
    // reference: phi(u, v) = f(v) on J(N), which covers the whole grid here
    double err = 0.0;
    for (int i = 0; i < grid.nu; ++i)
      for (int j = 0; j < grid.nv; ++j)
        err = std::max(err, std::fabs(sol.merged.at(i, j) - f.f[j]));
    return err;
  }
  // kg_jump: transverse-derivative jump equals -(q/4) ∫ f, constant in v
  const double integral =
      simpson([&fe](double v) { return fe(0.0, v); }, p.f_lo, p.f_hi, 20000);
  const double expected = -0.25 * integral;
  const std::vector<double> jump = measure_du_jump(sol);
  double err = 0.0;
  for (double x : jump) err = std::max(err, std::fabs(x - expected));
  return err;
}

int run_converge(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<double> h_list = cfg.h_list;
  if (h_list.empty()) h_list = {0.08, 0.04, 0.02};
  const SolvePath path = parse_path(cfg.converge_path);
  const std::string problem = cfg.converge_problem;

  const ConvergenceStudy study = convergence_study(
      [&](double h) { return converge_error(problem, path, h); }, h_list);

  std::ofstream csv(out_dir + "/convergence.csv");
  csv << "h,error,observed_order\n";
  for (const auto& row : study.rows)
    csv << format_double(row.h) << ',' << format_double(row.error) << ','
        << format_double(row.observed_order) << '\n';

  Json report = study_to_json(study);
  report["problem"] = problem;
  report["path"] = path_name(path);
  write_json(out_dir + "/convergence.json", report);
  return study.monotone ? 0 : 1;
}

}  // namespace charcauchy
