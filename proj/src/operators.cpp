#include "charcauchy/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"
#include "charcauchy/parallel.hpp"

namespace charcauchy {

double Coefficient::jet(int k, double v) const {
  if (zero) return 0.0;
  if (k > jet_order)
    throw std::invalid_argument("coefficient jet order exceeded (requested " +
                                std::to_string(k) + ", have " +
                                std::to_string(jet_order) + ")");
  return jets(k, v);
}

Coefficient Coefficient::zero_coefficient() {
  Coefficient c;
  c.fn = [](double, double) { return 0.0; };
  c.jets = [](int, double) { return 0.0; };
  c.jet_order = 64;
  c.zero = true;
  return c;
}

Coefficient Coefficient::constant(double value) {
  if (value == 0.0) return zero_coefficient();
  Coefficient c;
  c.fn = [value](double, double) { return value; };
  c.jets = [value](int k, double) { return k == 0 ? value : 0.0; };
  c.jet_order = 64;
  return c;
}

Coefficient Coefficient::from_expr(Expr e, int jet_order) {
  Coefficient c;
  c.jet_order = jet_order;
  auto shared = std::make_shared<Expr>(std::move(e));
  c.fn = [shared](double u, double v) { return (*shared)(u, v); };
  c.jets = [shared, jet_order](int k, double v) {
    const auto series = shared->u_series(v, jet_order);
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;
    return series[k] * factorial;
  };
  return c;
}

Coefficient Coefficient::from_function(std::function<double(double, double)> f,
                                       int jet_order, double fd_step) {
  Coefficient c;
  c.jet_order = jet_order;
  c.fn = f;
  c.jets = [f, fd_step](int k, double v) {
    if (k == 0) return f(0.0, v);
    const double scale = std::max(1.0, std::cbrt(std::fabs(f(0.0, v))));
    return nth_derivative([f, v](double u) { return f(u, v); }, 0.0, k,
                          fd_step * scale);
  };
  return c;
}

GridField make_field(const SlabGrid& grid) {
  GridField f;
  f.grid = grid;
  f.a.assign(grid.size(), 0.0);
  return f;
}

GridField sample(const SlabGrid& grid, const std::function<double(double, double)>& f) {
  GridField out = make_field(grid);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) out.at(i, j) = f(grid.u(i), grid.v(j));
  return out;
}

double max_abs(const GridField& f) {
  double m = 0.0;
  for (double x : f.a) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs_diff(const GridField& f, const GridField& g) {
  if (f.a.size() != g.a.size())
    throw std::invalid_argument("field shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < f.a.size(); ++k)
    m = std::max(m, std::fabs(f.a[k] - g.a[k]));
  return m;
}

namespace {

void check_min_size(const SlabGrid& g) {
  if (g.nu < 3 || g.nv < 3)
    throw std::invalid_argument("grid too small: need >= 3 lines per direction");
}

// div_mu X = (1/rho) [d_u(rho A) + d_v(rho B)], rho = Omega/2; evaluated by
// 4th-order differences with the geometric step.
double div_X(const WaveOperator& op, const SlabGrid& grid, double u, double v) {
  const double step = std::max(1e-4, grid.h / 10.0);
  const auto& st = grid.spacetime;
  auto rho_a = [&](double uu) { return st.density_weight(uu, v) * op.A(uu, v); };
  auto rho_b = [&](double vv) { return st.density_weight(u, vv) * op.B(u, vv); };
  auto d4 = [step](const std::function<double(double)>& f, double x) {
    return (f(x - 2 * step) - 8.0 * f(x - step) + 8.0 * f(x + step) -
            f(x + 2 * step)) /
           (12.0 * step);
  };
  return (d4(rho_a, u) + d4(rho_b, v)) / st.density_weight(u, v);
}

enum class StencilKind { direct, adjoint };

template <bool Parallel>
GridField apply_stencil(const WaveOperator& op, const GridField& phi,
                        StencilKind kind) {
  check_min_size(phi.grid);
  const SlabGrid& g = phi.grid;
  GridField out = make_field(g);
  out.valid_margin = 1;
  const double h = g.h;
  const double inv2h = 1.0 / (2.0 * h);
  const double inv4h2 = 1.0 / (4.0 * h * h);
  const bool minkowski = g.spacetime.metric == MetricKind::minkowski;
  const double sign = kind == StencilKind::direct ? 1.0 : -1.0;
  const bool lower_order = !(op.A.zero && op.B.zero);

  auto row = [&](int i) {
    const double u = g.u(i);
    for (int j = 1; j < g.nv - 1; ++j) {
      const double v = g.v(j);
      const double puv = (phi.at(i + 1, j + 1) - phi.at(i + 1, j - 1) -
                          phi.at(i - 1, j + 1) + phi.at(i - 1, j - 1)) *
                         inv4h2;
      const double principal =
          minkowski ? 4.0 * puv : 4.0 * puv / g.spacetime.conformal_factor(u, v);
      double value = principal + op.q(u, v) * phi.at(i, j);
      if (lower_order) {
        const double pu = (phi.at(i + 1, j) - phi.at(i - 1, j)) * inv2h;
        const double pv = (phi.at(i, j + 1) - phi.at(i, j - 1)) * inv2h;
        value += sign * (op.A(u, v) * pu + op.B(u, v) * pv);
        if (kind == StencilKind::adjoint)
          value -= div_X(op, g, u, v) * phi.at(i, j);
      }
      out.at(i, j) = value;
    }
  };

  if constexpr (Parallel) {
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
    for (int i = 1; i < g.nu - 1; ++i) row(i);
#else
    for (int i = 1; i < g.nu - 1; ++i) row(i);
#endif
  } else {
    for (int i = 1; i < g.nu - 1; ++i) row(i);
  }
  return out;
}

}  // namespace

GridField apply_P(const WaveOperator& op, const GridField& phi) {
  return apply_stencil<true>(op, phi, StencilKind::direct);
}

GridField apply_P_adjoint(const WaveOperator& op, const GridField& chi) {
  return apply_stencil<true>(op, chi, StencilKind::adjoint);
}

namespace serial {

GridField apply_P(const WaveOperator& op, const GridField& phi) {
  return apply_stencil<false>(op, phi, StencilKind::direct);
}

GridField apply_P_adjoint(const WaveOperator& op, const GridField& chi) {
  return apply_stencil<false>(op, chi, StencilKind::adjoint);
}

}  // namespace serial

std::pair<GridField, GridField> green_vector_field(const WaveOperator& op,
                                                   const GridField& chi,
                                                   const GridField& phi) {
  if (chi.a.size() != phi.a.size())
    throw std::invalid_argument("field shape mismatch");
  const SlabGrid& g = phi.grid;
  check_min_size(g);
  GridField ju = make_field(g), jv = make_field(g);
  ju.valid_margin = jv.valid_margin = 1;
  const double inv2h = 1.0 / (2.0 * g.h);
  for (int i = 1; i < g.nu - 1; ++i) {
    const double u = g.u(i);
    for (int j = 1; j < g.nv - 1; ++j) {
      const double v = g.v(j);
      const double guv = g.spacetime.inverse_uv(u, v);
      const double pu = (phi.at(i + 1, j) - phi.at(i - 1, j)) * inv2h;
      const double pv = (phi.at(i, j + 1) - phi.at(i, j - 1)) * inv2h;
      const double cu = (chi.at(i + 1, j) - chi.at(i - 1, j)) * inv2h;
      const double cv = (chi.at(i, j + 1) - chi.at(i, j - 1)) * inv2h;
      const double cp = chi.at(i, j) * phi.at(i, j);
      // grad f has components (g^{uv} f_v, g^{uv} f_u)
      ju.at(i, j) = guv * (chi.at(i, j) * pv - phi.at(i, j) * cv) + cp * op.A(u, v);
      jv.at(i, j) = guv * (chi.at(i, j) * pu - phi.at(i, j) * cu) + cp * op.B(u, v);
    }
  }
  return {std::move(ju), std::move(jv)};
}

namespace {

bool supported_in_interior(const GridField& f, int margin, double tol) {
  const SlabGrid& g = f.grid;
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j)
      if (i < margin || i >= g.nu - margin || j < margin || j >= g.nv - margin)
        if (std::fabs(f.at(i, j)) > tol) return false;
  return true;
}

}  // namespace

GreenIdentityReport check_green_identity(const WaveOperator& op,
                                         const GridField& phi,
                                         const GridField& chi) {
  const SlabGrid& g = phi.grid;
  const double scale = 1.0 + max_abs(phi) * std::max(1.0, max_abs(chi));
  if (!supported_in_interior(phi, 3, 1e-12 * scale) ||
      !supported_in_interior(chi, 3, 1e-12 * scale))
    throw std::invalid_argument(
        "support-violation: fields must vanish near the grid boundary");

  const GridField p_phi = apply_P(op, phi);
  const GridField pd_chi = apply_P_adjoint(op, chi);
  auto [ju, jv] = green_vector_field(op, chi, phi);

  GreenIdentityReport rep;
  const double inv2h = 1.0 / (2.0 * g.h);
  std::vector<double> partial(g.nu, 0.0);
  for (int i = 2; i < g.nu - 2; ++i) {
    double rowsum = 0.0;
    const double u = g.u(i);
    for (int j = 2; j < g.nv - 2; ++j) {
      const double v = g.v(j);
      const double rho = g.spacetime.density_weight(u, v);
      // div_mu j = (1/rho)[d_u(rho j^u) + d_v(rho j^v)]
      const double du = (g.spacetime.density_weight(g.u(i + 1), v) * ju.at(i + 1, j) -
                         g.spacetime.density_weight(g.u(i - 1), v) * ju.at(i - 1, j)) *
                        inv2h;
      const double dv = (g.spacetime.density_weight(u, g.v(j + 1)) * jv.at(i, j + 1) -
                         g.spacetime.density_weight(u, g.v(j - 1)) * jv.at(i, j - 1)) *
                        inv2h;
      const double div = (du + dv) / rho;
      const double lhs = chi.at(i, j) * p_phi.at(i, j) - pd_chi.at(i, j) * phi.at(i, j);
      rep.max_pointwise_residual =
          std::max(rep.max_pointwise_residual, std::fabs(lhs - div));
      rowsum += lhs * rho;
    }
    partial[i] = rowsum * g.h * g.h;
  }
  rep.adjoint_quadrature_residual = std::fabs(ordered_sum(partial));
  return rep;
}

double pair_mu(const GridField& a, const GridField& b) {
  if (a.a.size() != b.a.size())
    throw std::invalid_argument("field shape mismatch");
  const SlabGrid& g = a.grid;
  std::vector<double> partial(g.nu, 0.0);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
  for (int i = 0; i < g.nu; ++i) {
    double s = 0.0;
    for (int j = 0; j < g.nv; ++j)
      s += a.at(i, j) * b.at(i, j) * g.spacetime.density_weight(g.u(i), g.v(j));
    partial[i] = s * g.h * g.h;
  }
  return ordered_sum(partial);
}

double pair_mu_region(const GridField& a, const GridField& b, CausalRegion D) {
  if (a.a.size() != b.a.size())
    throw std::invalid_argument("field shape mismatch");
  const SlabGrid& g = a.grid;
  std::vector<double> partial(g.nu, 0.0);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
  for (int i = 0; i < g.nu; ++i) {
    double s = 0.0;
    for (int j = 0; j < g.nv; ++j) {
      const double w = indicator_weight(g, i, j, D);
      if (w == 0.0) continue;
      s += w * a.at(i, j) * b.at(i, j) *
           g.spacetime.density_weight(g.u(i), g.v(j));
    }
    partial[i] = s * g.h * g.h;
  }
  return ordered_sum(partial);
}

double c2_norm(const GridField& f) {
  const SlabGrid& g = f.grid;
  const double h2 = g.h * g.h;
  double m = 0.0;
  for (int i = 1; i < g.nu - 1; ++i) {
    for (int j = 1; j < g.nv - 1; ++j) {
      m = std::max(m, std::fabs(f.at(i, j)));
      m = std::max(m, std::fabs(f.at(i + 1, j) - f.at(i - 1, j)) / (2 * g.h));
      m = std::max(m, std::fabs(f.at(i, j + 1) - f.at(i, j - 1)) / (2 * g.h));
      m = std::max(m, std::fabs(f.at(i + 1, j) - 2 * f.at(i, j) + f.at(i - 1, j)) / h2);
      m = std::max(m, std::fabs(f.at(i, j + 1) - 2 * f.at(i, j) + f.at(i, j - 1)) / h2);
      m = std::max(m, std::fabs(f.at(i + 1, j + 1) - f.at(i + 1, j - 1) -
                                f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) /
                          (4 * h2));
    }
  }
  return m;
}

double support_leak(const GridField& f, CausalRegion region, double inflate_h) {
  const SlabGrid& g = f.grid;
  double leak = 0.0;
  for (int i = 0; i < g.nu; ++i) {
    for (int j = 0; j < g.nv; ++j) {
      // shrink the point toward the region by the inflation before testing
      const double u = g.u(i);
      const double v = g.v(j);
      bool inside = false;
      for (int du = -1; du <= 1 && !inside; ++du)
        for (int dv = -1; dv <= 1 && !inside; ++dv) {
          const double uu = u + du * inflate_h;
          const double vv = v + dv * inflate_h;
          if (g.spacetime.in_slab(uu, vv) &&
              classify(g.spacetime, uu, vv, region))
            inside = true;
        }
      if (!inside) leak = std::max(leak, std::fabs(f.at(i, j)));
    }
  }
  return leak;
}

}  // namespace charcauchy
