#include "charcauchy/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/parallel.hpp"

namespace charcauchy {

SingleLayer SingleLayer::delta(const SlabGrid& grid) {
  SingleLayer s;
  s.weight.resize(grid.nv);
  for (int j = 0; j < grid.nv; ++j)
    s.weight[j] = grid.spacetime.density_weight(0.0, grid.v(j));
  return s;
}

namespace {

constexpr double instability_limit = 1e12;

void require_minkowski(const SlabGrid& g) {
  if (g.spacetime.metric != MetricKind::minkowski)
    throw std::invalid_argument(
        "green operators are implemented for the Minkowski slab only");
}

struct CellSource {
  const GridField* field = nullptr;
  std::optional<CausalRegion> mask;
  const SlabGrid* grid = nullptr;
  bool forward = true;  // retarded cells look back, advanced cells look ahead

  // source for the cell whose computed corner is (i, j)
  double operator()(int i, int j) const {
    if (!field) return 0.0;
    double s;
    double uc, vc;
    if (forward) {
      s = 0.25 * (field->at(i, j) + field->at(i - 1, j) + field->at(i, j - 1) +
                  field->at(i - 1, j - 1));
      uc = grid->u(i) - 0.5 * grid->h;
      vc = grid->v(j) - 0.5 * grid->h;
    } else {
      s = 0.25 * (field->at(i, j) + field->at(i + 1, j) + field->at(i, j + 1) +
                  field->at(i + 1, j + 1));
      uc = grid->u(i) + 0.5 * grid->h;
      vc = grid->v(j) + 0.5 * grid->h;
    }
    if (mask && !classify(grid->spacetime, uc, vc, *mask)) return 0.0;
    return s;
  }
};

// P phi = S integrated over one grid cell; the computed corner enters the
// lower-order terms through the predictor (one fixed-point sweep).
inline double retarded_cell(const WaveOperator& op, const SlabGrid& g,
                            const GridField& phi, double source, int i, int j) {
  const double h = g.h;
  const double uc = g.u(i) - 0.5 * h;
  const double vc = g.v(j) - 0.5 * h;
  const double p = phi.at(i, j - 1) + phi.at(i - 1, j) - phi.at(i - 1, j - 1);
  const double fc = 0.25 * (phi.at(i - 1, j - 1) + phi.at(i - 1, j) +
                            phi.at(i, j - 1) + p);
  const double fu = ((phi.at(i, j - 1) + p) - (phi.at(i - 1, j - 1) + phi.at(i - 1, j))) /
                    (2.0 * h);
  const double fv = ((phi.at(i - 1, j) + p) - (phi.at(i - 1, j - 1) + phi.at(i, j - 1))) /
                    (2.0 * h);
  return p + 0.25 * h * h *
                 (source - op.A(uc, vc) * fu - op.B(uc, vc) * fv -
                  op.q(uc, vc) * fc);
}

inline double advanced_cell(const WaveOperator& op, const SlabGrid& g,
                            const GridField& phi, double source, int i, int j) {
  const double h = g.h;
  const double uc = g.u(i) + 0.5 * h;
  const double vc = g.v(j) + 0.5 * h;
  const double p = phi.at(i, j + 1) + phi.at(i + 1, j) - phi.at(i + 1, j + 1);
  const double fc = 0.25 * (phi.at(i + 1, j + 1) + phi.at(i + 1, j) +
                            phi.at(i, j + 1) + p);
  const double fu = ((phi.at(i + 1, j) + phi.at(i + 1, j + 1)) - (p + phi.at(i, j + 1))) /
                    (2.0 * h);
  const double fv = ((phi.at(i, j + 1) + phi.at(i + 1, j + 1)) - (p + phi.at(i + 1, j))) /
                    (2.0 * h);
  return p + 0.25 * h * h *
                 (source - op.A(uc, vc) * fu - op.B(uc, vc) * fv -
                  op.q(uc, vc) * fc);
}

template <bool Parallel>
void march_retarded(const WaveOperator& op, const CellSource& src,
                    GridField& phi, int first_i) {
  const SlabGrid& g = phi.grid;
  for (int d = first_i + 1; d <= g.nu - 1 + g.nv - 1; ++d) {
    const int ilo = std::max(first_i, d - (g.nv - 1));
    const int ihi = std::min(g.nu - 1, d - 1);
    double diag_max = 0.0;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) \
    reduction(max : diag_max) if (Parallel && ihi - ilo > 63)
#endif
    for (int i = ilo; i <= ihi; ++i) {
      const int j = d - i;
      const double value = retarded_cell(op, g, phi, src(i, j), i, j);
      phi.at(i, j) = value;
      diag_max = std::max(diag_max, std::fabs(value));
    }
    if (diag_max > instability_limit)
      throw std::runtime_error("instability detected in characteristic marching");
  }
}

template <bool Parallel>
void march_advanced(const WaveOperator& op, const CellSource& src,
                    GridField& phi, int last_i) {
  const SlabGrid& g = phi.grid;
  for (int d = last_i + g.nv - 2; d >= 0; --d) {
    const int ilo = std::max(0, d - (g.nv - 2));
    const int ihi = std::min(last_i, d);
    double diag_max = 0.0;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) \
    reduction(max : diag_max) if (Parallel && ihi - ilo > 63)
#endif
    for (int i = ilo; i <= ihi; ++i) {
      const int j = d - i;
      const double value = advanced_cell(op, g, phi, src(i, j), i, j);
      phi.at(i, j) = value;
      diag_max = std::max(diag_max, std::fabs(value));
    }
    if (diag_max > instability_limit)
      throw std::runtime_error("instability detected in characteristic marching");
  }
}

void check_inflow(const CellSource& src, const SlabGrid& g, bool forward,
                  double scale) {
  const double tol = 1e-12 * (1.0 + scale);
  if (forward) {
    for (int i = 1; i < g.nu; ++i)
      if (std::fabs(src(i, 1)) > tol)
        throw std::invalid_argument(
            "source-at-inflow-boundary: retarded source active at the past edge");
    for (int j = 1; j < g.nv; ++j)
      if (std::fabs(src(1, j)) > tol)
        throw std::invalid_argument(
            "source-at-inflow-boundary: retarded source active at the past edge");
  } else {
    for (int i = 0; i < g.nu - 1; ++i)
      if (std::fabs(src(i, g.nv - 2)) > tol)
        throw std::invalid_argument(
            "source-at-inflow-boundary: advanced source active at the future edge");
    for (int j = 0; j < g.nv - 1; ++j)
      if (std::fabs(src(g.nu - 2, j)) > tol)
        throw std::invalid_argument(
            "source-at-inflow-boundary: advanced source active at the future edge");
  }
}

template <bool Parallel>
GridField solve_impl(const WaveOperator& op, const GridField& source,
                     std::optional<CausalRegion> mask, bool forward) {
  require_minkowski(source.grid);
  CellSource src{&source, mask, &source.grid, forward};
  check_inflow(src, source.grid, forward, max_abs(source));
  GridField phi = make_field(source.grid);
  if (forward)
    march_retarded<Parallel>(op, src, phi, 1);
  else
    march_advanced<Parallel>(op, src, phi, source.grid.nu - 2);
  return phi;
}

}  // namespace

GridField retarded_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask) {
  return solve_impl<true>(op, source, mask, true);
}

GridField advanced_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask) {
  return solve_impl<true>(op, source, mask, false);
}

namespace serial {

GridField retarded_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask) {
  return solve_impl<false>(op, source, mask, true);
}

GridField advanced_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask) {
  return solve_impl<false>(op, source, mask, false);
}

}  // namespace serial

GridField causal_green(const WaveOperator& op, const GridField& source,
                       std::optional<CausalRegion> mask) {
  GridField plus = retarded_solve(op, source, mask);
  const GridField minus = advanced_solve(op, source, mask);
  for (std::size_t k = 0; k < plus.a.size(); ++k) plus.a[k] -= minus.a[k];
  return plus;
}

// Trace equation for the one-sided pieces.  For phi = 1_{u>0} Phi with
// P Phi = 0 on u > 0, pairing against chi mu_g and applying the divergence
// theorem to the Green vector field over {u > 0} leaves only the boundary
// term on u = 0:
//   <P phi, chi mu_g> = ∫ chi(0,v) [2 tau'(v) + (A(0,v)/2) tau(v)] dv,
// with tau = Phi(0+, .).  Matching a layer rho = w |dv| therefore requires
//   4 tau' + A tau = 2 w,
// integrated upward from zero below the support; the advanced side is the
// mirror image with the opposite sign and zero above the support.  The
// normalisation is cross-checked against the smeared-delta construction in
// tests/test_green.cpp.
SingleLayerParts solve_single_layer_parts(const WaveOperator& op,
                                          const SingleLayer& layer,
                                          const SlabGrid& grid) {
  require_minkowski(grid);
  if (static_cast<int>(layer.weight.size()) != grid.nv)
    throw std::invalid_argument("layer weight must match the v grid");
  double wmax = 0.0;
  for (double x : layer.weight) wmax = std::max(wmax, std::fabs(x));
  for (int j : {0, 1, 2, grid.nv - 3, grid.nv - 2, grid.nv - 1})
    if (std::fabs(layer.weight[j]) > 1e-12 * (1.0 + wmax))
      throw std::invalid_argument(
          "support-violation: layer weight must be compactly supported in the "
          "v range");

  std::vector<double> kappa(grid.nv), rhs_p(grid.nv), rhs_m(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    kappa[j] = op.A(0.0, grid.v(j));
    rhs_p[j] = 2.0 * single_layer_norm * layer.weight[j];
    rhs_m[j] = -rhs_p[j];
  }

  SingleLayerParts parts;
  parts.trace_plus = ode_march(kappa, rhs_p, grid.h, 0, +1);
  parts.trace_minus = ode_march(kappa, rhs_m, grid.h, grid.nv - 1, -1);

  CellSource no_source;
  no_source.grid = &grid;

  parts.retarded = make_field(grid);
  for (int j = 0; j < grid.nv; ++j)
    parts.retarded.at(grid.i_zero, j) = parts.trace_plus[j];
  march_retarded<true>(op, no_source, parts.retarded, grid.i_zero + 1);

  parts.advanced = make_field(grid);
  no_source.forward = false;
  for (int j = 0; j < grid.nv; ++j)
    parts.advanced.at(grid.i_zero, j) = parts.trace_minus[j];
  march_advanced<true>(op, no_source, parts.advanced, grid.i_zero - 1);
  return parts;
}

GridField green_single_layer(const WaveOperator& op, const SingleLayer& layer,
                             GreenDirection direction, const SlabGrid& grid) {
  SingleLayerParts parts = solve_single_layer_parts(op, layer, grid);
  switch (direction) {
    case GreenDirection::retarded: return std::move(parts.retarded);
    case GreenDirection::advanced: return std::move(parts.advanced);
    case GreenDirection::causal: {
      GridField out = std::move(parts.retarded);
      for (std::size_t k = 0; k < out.a.size(); ++k)
        out.a[k] -= parts.advanced.a[k];
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace charcauchy
