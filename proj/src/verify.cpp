#include "charcauchy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"
#include "charcauchy/parallel.hpp"

namespace charcauchy {

namespace {

// deterministic uniform in [0,1) independent of the standard library
struct SeededUniform {
  std::uint64_t state;
  explicit SeededUniform(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {
    next();
    next();
  }
  std::uint64_t next() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double operator()() { return (next() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
};

}  // namespace

TestFunctionBattery TestFunctionBattery::make(const SlabGrid& grid, int size,
                                              std::uint64_t seed,
                                              double margin) {
  TestFunctionBattery b;
  b.seed = seed;
  SeededUniform rng(seed);
  if (margin <= 0.0) margin = 4.0 * grid.h;
  const double u_lo = grid.u(0) + margin, u_hi = grid.u(grid.nu - 1) - margin;
  const double v_lo = grid.v_min + margin, v_hi = grid.v_max() - margin;
  if (u_hi - u_lo < 4.0 * grid.h || v_hi - v_lo < 4.0 * grid.h)
    throw std::invalid_argument("grid too small for a test-function battery");
  for (int m = 0; m < size; ++m) {
    const double wu = rng.in(0.35, 0.5) * (u_hi - u_lo) / 2.0;
    const double wv = rng.in(0.35, 0.5) * (v_hi - v_lo) / 2.0;
    const double cu = rng.in(u_lo + wu, u_hi - wu);
    const double cv = rng.in(v_lo + wv, v_hi - wv);
    const double au = rng.in(-0.8, 0.8) / wu;
    const double av = rng.in(-0.8, 0.8) / wv;
    const double axy = rng.in(-0.5, 0.5) / (wu * wv);
    GridField chi = sample(grid, [=](double u, double v) {
      const double mod =
          1.0 + au * (u - cu) + av * (v - cv) + axy * (u - cu) * (v - cv);
      return mod * unit_bump((u - cu) / wu) * unit_bump((v - cv) / wv);
    });
    b.c2_norms.push_back(c2_norm(chi));
    b.members.push_back(std::move(chi));
  }
  return b;
}

namespace {

void check_battery_supports(const GridField& Phi,
                            const TestFunctionBattery& battery,
                            CausalRegion /*D*/) {
  const SlabGrid& g = Phi.grid;
  // supports must stay clear of the grid boundary so the only boundary piece
  // of D met by supp(Phi chi) is N itself
  for (const GridField& chi : battery.members) {
    const double scale = 1.0 + max_abs(chi);
    for (int i = 0; i < g.nu; ++i)
      for (int j = 0; j < g.nv; ++j)
        if (i < 3 || i >= g.nu - 3 || j < 3 || j >= g.nv - 3)
          if (std::fabs(chi.at(i, j)) > 1e-12 * scale)
            throw std::invalid_argument(
                "support-violation: test function touches the grid boundary");
  }
}

int outward_sign(CausalRegion D) {
  // outward conormal of D on N: +du for J-, -du for J+
  if (D == CausalRegion::Jminus) return +1;
  if (D == CausalRegion::Jplus) return -1;
  throw std::invalid_argument("domain must be Jplus or Jminus");
}

// tangential derivative along the u = 0 row
std::vector<double> trace_row(const GridField& f, int i) {
  const SlabGrid& g = f.grid;
  std::vector<double> row(g.nv);
  for (int j = 0; j < g.nv; ++j) row[j] = f.at(i, j);
  return row;
}

double trapezoid_on_N(const SlabGrid& g, std::span<const double> integrand) {
  double s = 0.5 * (integrand[0] + integrand[g.nv - 1]);
  for (int j = 1; j < g.nv - 1; ++j) s += integrand[j];
  return s * g.h;
}

}  // namespace

std::vector<double> boundary_T_weight(const WaveOperator& op,
                                      const SlabGrid& grid,
                                      std::span<const double> phi_trace,
                                      CausalRegion D,
                                      bool include_expansion_term) {
  const int sign = outward_sign(D);
  const std::vector<double> dphi =
      derivative_samples(phi_trace, grid.h);
  std::vector<double> theta(grid.nv, 0.0);
  if (include_expansion_term) theta = slab_line_expansion_term(grid);
  std::vector<double> w(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    const double v = grid.v(j);
    // n = sign * du: n# = sign * g^{uv} d/dv, iota_n mu = |det g|^{1/2} |dv|
    const double nsharp_v = sign * grid.spacetime.inverse_uv(0.0, v);
    const double iota = grid.spacetime.density_weight(0.0, v);
    const double nX = sign * op.A(0.0, v);
    w[j] = (2.0 * nsharp_v * dphi[j] + (nX + sign * theta[j]) * phi_trace[j]) * iota;
  }
  return w;
}

ResidualReport verify_jump_formula(const WaveOperator& op, CausalRegion D,
                                   const GridField& Phi,
                                   const TestFunctionBattery& battery) {
  check_battery_supports(Phi, battery, D);
  const SlabGrid& g = Phi.grid;
  const int sign = outward_sign(D);
  const int i0 = g.i_zero;
  const std::vector<double> phi_row = trace_row(Phi, i0);
  const std::vector<double> dphi = derivative_samples(phi_row, g.h);

  ResidualReport rep;
  rep.per_member.resize(battery.members.size());

#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
#endif
  for (std::size_t m = 0; m < battery.members.size(); ++m) {
    const GridField& chi = battery.members[m];
    auto [ju, jv] = green_vector_field(op, chi, Phi);

    // volume side: ∫_D div_mu j, nodes on N at half weight
    std::vector<double> partial(g.nu, 0.0);
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int i = 1; i < g.nu - 1; ++i) {
      double rowsum = 0.0;
      const double u = g.u(i);
      for (int j = 1; j < g.nv - 1; ++j) {
        const double w = indicator_weight(g, i, j, D);
        if (w == 0.0) continue;
        const double v = g.v(j);
        const double du =
            (g.spacetime.density_weight(g.u(i + 1), v) * ju.at(i + 1, j) -
             g.spacetime.density_weight(g.u(i - 1), v) * ju.at(i - 1, j)) *
            inv2h;
        const double dv =
            (g.spacetime.density_weight(u, g.v(j + 1)) * jv.at(i, j + 1) -
             g.spacetime.density_weight(u, g.v(j - 1)) * jv.at(i, j - 1)) *
            inv2h;
        rowsum += w * (du + dv);  // rho * div_mu j
      }
      partial[i] = rowsum * g.h * g.h;
    }
    const double volume_side = ordered_sum(partial);

    // boundary side on N with outward n = sign*du
    const std::vector<double> chi_row = trace_row(chi, i0);
    const std::vector<double> dchi = derivative_samples(chi_row, g.h);
    std::vector<double> integrand(g.nv);
    for (int j = 0; j < g.nv; ++j) {
      const double v = g.v(j);
      const double nsharp = sign * g.spacetime.inverse_uv(0.0, v);
      const double iota = g.spacetime.density_weight(0.0, v);
      const double nX = sign * op.A(0.0, v);
      integrand[j] = (chi_row[j] * nsharp * dphi[j] -
                      phi_row[j] * nsharp * dchi[j] +
                      phi_row[j] * chi_row[j] * nX) *
                     iota;
    }
    const double boundary_side = trapezoid_on_N(g, integrand);
    rep.per_member[m] = std::fabs(volume_side - boundary_side);
  }
  for (double r : rep.per_member) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

ResidualReport verify_T_identity(const WaveOperator& op, const GridField& Phi,
                                 const TestFunctionBattery& battery,
                                 CausalRegion D) {
  check_battery_supports(Phi, battery, D);
  const SlabGrid& g = Phi.grid;
  const GridField P_Phi = apply_P(op, Phi);
  const std::vector<double> phi_row = trace_row(Phi, g.i_zero);
  const std::vector<double> t_weight = boundary_T_weight(op, g, phi_row, D);

  ResidualReport rep;
  rep.per_member.resize(battery.members.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
#endif
  for (std::size_t m = 0; m < battery.members.size(); ++m) {
    const GridField& chi = battery.members[m];
    const GridField Pd_chi = apply_P_adjoint(op, chi);

    std::vector<double> partial(g.nu, 0.0);
    for (int i = 0; i < g.nu; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < g.nv; ++j) {
        const double w = indicator_weight(g, i, j, D);
        if (w == 0.0) continue;
        const double rho = g.spacetime.density_weight(g.u(i), g.v(j));
        rowsum += w * rho *
                  (chi.at(i, j) * P_Phi.at(i, j) - Phi.at(i, j) * Pd_chi.at(i, j));
      }
      partial[i] = rowsum * g.h * g.h;
    }
    const double commutator_side = ordered_sum(partial);

    std::vector<double> integrand(g.nv);
    for (int j = 0; j < g.nv; ++j)
      integrand[j] = chi.at(g.i_zero, j) * t_weight[j];
    const double layer_side = trapezoid_on_N(g, integrand);
    rep.per_member[m] = std::fabs(commutator_side - layer_side);
  }
  for (double r : rep.per_member) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

ResidualReport verify_second_jump(const WaveOperator& op,
                                  const CharacteristicDatum& f,
                                  const TestFunctionBattery& battery,
                                  const SolverConfig& cfg, CausalRegion D) {
  const SlabGrid& g = battery.members.at(0).grid;
  const int sign = outward_sign(D);
  const MergedSolution sol =
      solve_rendall(op, f, Inhomogeneity::none(), cfg, g);
  const GridField& Phi =
      D == CausalRegion::Jplus ? sol.phi_plus : sol.phi_minus;

  // precondition guard: Phi must be an approximate kernel element on D.  The
  // pointwise bound carries the cutoff-derivative constant of the Borel band,
  // hence the generous factor.
  {
    const GridField P_Phi = apply_P(op, Phi);
    double res = 0.0, scale = 1e-12 + max_abs(Phi);
    for (int i = 1; i < g.nu - 1; ++i)
      for (int j = 1; j < g.nv - 1; ++j)
        if (indicator_weight(g, i, j, D) == 1.0)
          res = std::max(res, std::fabs(P_Phi.at(i, j)));
    if (res > 1e4 * g.h * g.h * scale)
      throw std::runtime_error(
          "one-sided field is not an approximate kernel element on D");
  }

  ResidualReport rep;
  rep.per_member.resize(battery.members.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
#endif
  for (std::size_t m = 0; m < battery.members.size(); ++m) {
    const GridField& chi = battery.members[m];
    const GridField Pd_chi = apply_P_adjoint(op, chi);

    // <P(Phi 1_D), chi mu> = ∫_D Phi P†chi mu
    const double lhs = pair_mu_region(Phi, Pd_chi, D);

    // -<Phi delta_N, T† chi mu> with T = 2 nhat# + [2 div nhat# - Theta + nhat(X)],
    // nhat = sign*du extended globally, Theta = 0 extension:
    // T† chi = -2 nhat# chi + [nhat(X)] chi on the Minkowski slab
    const std::vector<double> chi_row = trace_row(chi, g.i_zero);
    const std::vector<double> dchi = derivative_samples(chi_row, g.h);
    std::vector<double> integrand(g.nv);
    for (int j = 0; j < g.nv; ++j) {
      const double v = g.v(j);
      const double nsharp = sign * g.spacetime.inverse_uv(0.0, v);
      const double iota = g.spacetime.density_weight(0.0, v);
      const double t_dagger_chi =
          -2.0 * nsharp * dchi[j] + sign * op.A(0.0, v) * chi_row[j];
      integrand[j] = -Phi.at(g.i_zero, j) * t_dagger_chi * iota;
    }
    const double rhs = trapezoid_on_N(g, integrand);
    rep.per_member[m] = std::fabs(lhs - rhs);
  }
  for (double r : rep.per_member) rep.max_residual = std::max(rep.max_residual, r);
  return rep;
}

EquivarianceReport verify_equivariance(const WaveOperator& op,
                                       std::span<const double> lambda,
                                       std::span<const double> phi_N,
                                       const TestFunctionBattery& battery) {
  const SlabGrid& g = battery.members.at(0).grid;
  if (static_cast<int>(lambda.size()) != g.nv ||
      static_cast<int>(phi_N.size()) != g.nv)
    throw std::invalid_argument("lambda and phi_N must match the v grid");
  for (int j = 0; j < g.nv; ++j)
    if (std::fabs(op.A(0.0, g.v(j))) > 1e-14)
      throw std::invalid_argument(
          "equivariance requires X tangent to N (A = 0)");
  // in 1+1 the whole line is a single generator, so "constant along
  // generators" forces a constant
  for (int j = 0; j < g.nv; ++j) {
    if (!(lambda[j] > 0.0))
      throw std::invalid_argument("lambda must be positive");
    if (std::fabs(lambda[j] - lambda[0]) > 1e-12 * (1.0 + std::fabs(lambda[0])))
      throw std::invalid_argument(
          "lambda-varies-along-generators: lambda must be constant along the "
          "generator");
  }
  const double l = lambda[0];
  const double d = 1.0;  // slab dimension d+1 = 2

  // side 1: S_{mu_g'} T_{g'} phi paired against chi mu_g.
  // g' = l*g on N: n#' = (1/l) n#, iota_n mu_{g'} = l^{(d+1)/2} iota_n mu_g,
  // and the pairing against chi mu_g brings in mu_g / mu_{g'} = l^{-(d+1)/2}.
  const std::vector<double> dphi = derivative_samples(phi_N, g.h);
  std::vector<double> lhs_weight(g.nv), rhs_weight(g.nv);
  const double mu_ratio = std::pow(l, -(d + 1.0) / 2.0);
  for (int j = 0; j < g.nv; ++j) {
    const double v = g.v(j);
    const double nsharp = g.spacetime.inverse_uv(0.0, v);
    const double iota = g.spacetime.density_weight(0.0, v);
    const double nsharp_p = nsharp / l;
    const double iota_p = std::pow(l, (d + 1.0) / 2.0) * iota;
    lhs_weight[j] = 2.0 * nsharp_p * dphi[j] * iota_p * mu_ratio;
  }
  // side 2: S_{mu_g} T_g (phi / l) against chi mu_g
  std::vector<double> scaled(phi_N.begin(), phi_N.end());
  for (double& x : scaled) x /= l;
  const std::vector<double> dscaled = derivative_samples(scaled, g.h);
  for (int j = 0; j < g.nv; ++j) {
    const double v = g.v(j);
    rhs_weight[j] = 2.0 * g.spacetime.inverse_uv(0.0, v) * dscaled[j] *
                    g.spacetime.density_weight(0.0, v);
  }

  EquivarianceReport rep;
  for (const GridField& chi : battery.members) {
    std::vector<double> a(g.nv), b(g.nv);
    for (int j = 0; j < g.nv; ++j) {
      a[j] = chi.at(g.i_zero, j) * lhs_weight[j];
      b[j] = chi.at(g.i_zero, j) * rhs_weight[j];
    }
    const double sa = trapezoid_on_N(g, a);
    const double sb = trapezoid_on_N(g, b);
    double scale = 0.0;
    for (int j = 0; j < g.nv; ++j)
      scale = std::max(scale, std::fabs(lhs_weight[j]));
    scale = std::max(scale * (g.v_max() - g.v_min), 1e-300);
    rep.max_rel_error = std::max(rep.max_rel_error, std::fabs(sa - sb) / scale);
  }
  return rep;
}

IndependenceReport independence_suite(const WaveOperator& op,
                                      const CharacteristicDatum& f,
                                      const Inhomogeneity& F,
                                      const std::vector<SolverConfig>& variants,
                                      const SlabGrid& grid, SolvePath path) {
  if (variants.size() < 2)
    throw std::invalid_argument("independence suite needs >= 2 variants");
  std::vector<MergedSolution> sols;
  sols.reserve(variants.size());
  for (const SolverConfig& cfg : variants)
    sols.push_back(solve_path(path, op, f, F, cfg, grid));
  IndependenceReport rep;
  for (std::size_t a = 0; a < sols.size(); ++a) {
    for (std::size_t b = a + 1; b < sols.size(); ++b) {
      const double d = merged_distance(sols[a], sols[b]);
      rep.pairwise.push_back(d);
      rep.max_distance = std::max(rep.max_distance, d);
    }
  }
  return rep;
}

ConvergenceStudy convergence_study(const std::function<double(double)>& error_at_h,
                                   std::span<const double> h_list) {
  if (h_list.size() < 3)
    throw std::invalid_argument("convergence study needs >= 3 grid levels");
  ConvergenceStudy study;
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    ConvergenceRow row;
    row.h = h_list[k];
    row.error = error_at_h(h_list[k]);
    if (k > 0) {
      const ConvergenceRow& prev = study.rows.back();
      if (row.error >= prev.error) study.monotone = false;
      row.observed_order =
          std::log(prev.error / row.error) / std::log(prev.h / row.h);
    }
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace charcauchy
