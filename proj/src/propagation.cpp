#include "charcauchy/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"

namespace charcauchy {

CharacteristicDatum CharacteristicDatum::zero(const SlabGrid& grid) {
  CharacteristicDatum d;
  d.f.assign(grid.nv, 0.0);
  d.v_a = grid.v(grid.nv / 2);
  d.v_b = d.v_a;
  return d;
}

CharacteristicDatum CharacteristicDatum::from_function(
    const SlabGrid& grid, const std::function<double(double)>& fn, double v_a,
    double v_b) {
  CharacteristicDatum d;
  d.v_a = v_a;
  d.v_b = v_b;
  d.f.resize(grid.nv);
  for (int j = 0; j < grid.nv; ++j) d.f[j] = fn(grid.v(j));
  return d;
}

Inhomogeneity Inhomogeneity::none() {
  Inhomogeneity F;
  F.F = Coefficient::zero_coefficient();
  F.zero = true;
  return F;
}

Inhomogeneity Inhomogeneity::from_coefficient(Coefficient F, double v_lo,
                                              double v_hi) {
  Inhomogeneity out;
  out.F = std::move(F);
  out.v_lo = v_lo;
  out.v_hi = v_hi;
  out.zero = false;
  return out;
}

TowerOde assemble_tower(const WaveOperator& op, const Inhomogeneity& F, int r,
                        const SlabGrid& grid) {
  if (r > op.A.jet_order || r > op.B.jet_order || r > op.q.jet_order ||
      (!F.zero && r > F.F.jet_order))
    throw std::invalid_argument("jet order exceeded in tower assembly");

  TowerOde ode;
  ode.kappa.resize(grid.nv);
  for (int j = 0; j < grid.nv; ++j) ode.kappa[j] = op.A.jet(0, grid.v(j));

  // cached coefficient jets on the v grid
  const int nv = grid.nv;
  std::vector<std::vector<double>> jetA(r + 1), jetB(r + 1), jetQ(r + 1),
      jetF(1);
  for (int k = 0; k <= r; ++k) {
    jetA[k].resize(nv);
    jetB[k].resize(nv);
    jetQ[k].resize(nv);
    for (int j = 0; j < nv; ++j) {
      const double v = grid.v(j);
      jetA[k][j] = op.A.jet(k, v);
      jetB[k][j] = op.B.jet(k, v);
      jetQ[k][j] = op.q.jet(k, v);
    }
  }
  jetF[0].assign(nv, 0.0);
  if (!F.zero)
    for (int j = 0; j < nv; ++j) jetF[0][j] = F.F.jet(r, grid.v(j));

  ode.rhs = [r, nv, jetA = std::move(jetA), jetB = std::move(jetB),
             jetQ = std::move(jetQ), jetF = std::move(jetF)](
                const std::vector<std::vector<double>>& psi,
                const std::vector<std::vector<double>>& dpsi) {
    if (static_cast<int>(psi.size()) < r + 1)
      throw std::invalid_argument("tower rhs needs psi_0..psi_r");
    std::vector<double> rhs = jetF[0];
    for (int j = 0; j < nv; ++j) {
      double s = 0.0;
      for (int k = 1; k <= r; ++k)
        s += binomial(r, k) * jetA[k][j] * psi[r + 1 - k][j];
      for (int k = 0; k <= r; ++k) {
        const double c = binomial(r, k);
        s += c * jetB[r - k][j] * dpsi[k][j];
        s += c * jetQ[r - k][j] * psi[k][j];
      }
      rhs[j] -= s;
    }
    return rhs;
  };
  return ode;
}

std::vector<double> ode_march(std::span<const double> kappa,
                              std::span<const double> rhs, double h, int start,
                              int dir) {
  const int n = static_cast<int>(kappa.size());
  std::vector<double> y(n, 0.0);
  auto f = [&](double k, double r, double yy) { return 0.25 * (r - k * yy); };
  int j = start;
  while ((dir > 0 && j < n - 1) || (dir < 0 && j > 0)) {
    const int jn = j + dir;
    const int mid = dir > 0 ? j : jn;  // midpoint between mid and mid+1
    const double km = midpoint_value(kappa, mid);
    const double rm = midpoint_value(rhs, mid);
    const double hh = dir * h;
    const double k1 = f(kappa[j], rhs[j], y[j]);
    const double k2 = f(km, rm, y[j] + 0.5 * hh * k1);
    const double k3 = f(km, rm, y[j] + 0.5 * hh * k2);
    const double k4 = f(kappa[jn], rhs[jn], y[j] + hh * k3);
    y[jn] = y[j] + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    j = jn;
  }
  return y;
}

JetSequence solve_propagation(const WaveOperator& op,
                              const CharacteristicDatum& f,
                              const Inhomogeneity& F, JetType type, int n_jet,
                              const SlabGrid& grid, int margin_steps) {
  if (n_jet < 1 || n_jet > 12)
    throw std::invalid_argument("n_jet must be in 1..12");
  if (static_cast<int>(f.f.size()) != grid.nv)
    throw std::invalid_argument("datum sample count must match the v grid");

  JetSequence seq;
  seq.order = n_jet;
  seq.type = type;
  seq.psi.resize(n_jet + 1);
  seq.dpsi.resize(n_jet + 1);
  seq.psi[0] = f.f;
  seq.dpsi[0] = derivative_samples(f.f, grid.h);

  // cross-section: below every support for future type, above for past
  int start;
  if (type == JetType::future) {
    double lo = f.v_a;
    if (!F.zero) lo = std::min(lo, F.v_lo);
    start = static_cast<int>(std::floor((lo - grid.v_min) / grid.h)) -
            margin_steps;
    if (start < 0)
      throw std::invalid_argument(
          "infeasible-cross-section: no grid margin below the data support");
  } else {
    double hi = f.v_b;
    if (!F.zero) hi = std::max(hi, F.v_hi);
    start = static_cast<int>(std::ceil((hi - grid.v_min) / grid.h)) +
            margin_steps;
    if (start > grid.nv - 1)
      throw std::invalid_argument(
          "infeasible-cross-section: no grid margin above the data support");
  }
  seq.cross_section_v = grid.v(start);
  const int dir = type == JetType::future ? +1 : -1;

  for (int r = 0; r < n_jet; ++r) {
    const TowerOde ode = assemble_tower(op, F, r, grid);
    const std::vector<double> rhs = ode.rhs(seq.psi, seq.dpsi);
    seq.psi[r + 1] = ode_march(ode.kappa, rhs, grid.h, start, dir);
    // d/dv psi_{r+1} from the ODE itself, consistent with the integrator
    seq.dpsi[r + 1].resize(grid.nv);
    for (int j = 0; j < grid.nv; ++j)
      seq.dpsi[r + 1][j] = 0.25 * (rhs[j] - ode.kappa[j] * seq.psi[r + 1][j]);
  }
  return seq;
}

std::vector<double> jump_table(const JetSequence& future,
                               const JetSequence& past) {
  if (future.psi.empty() || past.psi.empty() ||
      future.psi[0].size() != past.psi[0].size())
    throw std::invalid_argument("mismatched jet sequences");
  const int order = std::min(future.order, past.order);
  std::vector<double> delta(order + 1, 0.0);
  for (int r = 0; r <= order; ++r)
    for (std::size_t j = 0; j < future.psi[r].size(); ++j)
      delta[r] = std::max(delta[r],
                          std::fabs(future.psi[r][j] - past.psi[r][j]));
  return delta;
}

}  // namespace charcauchy
