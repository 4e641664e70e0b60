#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "charcauchy/expr.hpp"
#include "charcauchy/geometry.hpp"

namespace charcauchy {

// Scalar coefficient of the operator together with access to its transverse
// jets d^k/du^k on the line u = 0.
struct Coefficient {
  std::function<double(double, double)> fn;
  std::function<double(int, double)> jets;  // jets(k, v)
  int jet_order = 0;
  bool zero = false;

  double operator()(double u, double v) const { return zero ? 0.0 : fn(u, v); }
  double jet(int k, double v) const;

  static Coefficient zero_coefficient();
  static Coefficient constant(double c);
  // Exact jets via the expression's Taylor expansion in u.
  static Coefficient from_expr(Expr e, int jet_order = 12);
  // Jets by 6th-order Richardson-extrapolated centered differences.
  static Coefficient from_function(std::function<double(double, double)> f,
                                   int jet_order, double fd_step = 1e-2);
};

// P = box + X + [q] in null coordinates:
//   P phi = (4/Omega) phi_uv + A phi_u + B phi_v + q phi,
// with X = A d/du + B d/dv (A = b^t - b^x, B = b^t + b^x) and Omega the
// conformal factor of the slab metric (1 on Minkowski).
struct WaveOperator {
  Coefficient A, B, q;

  static WaveOperator box() {
    return {Coefficient::zero_coefficient(), Coefficient::zero_coefficient(),
            Coefficient::zero_coefficient()};
  }
  static WaveOperator klein_gordon(double q) {
    return {Coefficient::zero_coefficient(), Coefficient::zero_coefficient(),
            Coefficient::constant(q)};
  }
  bool self_adjoint() const { return A.zero && B.zero; }
};

struct GridField {
  SlabGrid grid;
  std::vector<double> a;
  int valid_margin = 0;  // outermost rings that carry no valid stencil data

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * grid.nv + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * grid.nv + j]; }
};

GridField make_field(const SlabGrid& grid);
GridField sample(const SlabGrid& grid, const std::function<double(double, double)>& f);

double max_abs(const GridField& f);
double max_abs_diff(const GridField& f, const GridField& g);

// Interior application of P by 2nd-order centered differences; the boundary
// ring is zeroed and flagged through valid_margin.
GridField apply_P(const WaveOperator& op, const GridField& phi);
GridField apply_P_adjoint(const WaveOperator& op, const GridField& chi);

namespace serial {
// Reference implementations without OpenMP, kept for the equivalence tests
// and the benchmark.  Outputs are bit-identical to the parallel kernels.
GridField apply_P(const WaveOperator& op, const GridField& phi);
GridField apply_P_adjoint(const WaveOperator& op, const GridField& chi);
}  // namespace serial

// Green vector field j[chi, phi] = chi grad phi - phi grad chi + chi phi X;
// returns the (u, v) components.
std::pair<GridField, GridField> green_vector_field(const WaveOperator& op,
                                                   const GridField& chi,
                                                   const GridField& phi);

struct GreenIdentityReport {
  double max_pointwise_residual = 0.0;  // |chi P phi - (P† chi) phi - div j|
  double adjoint_quadrature_residual = 0.0;  // |∫ (chi P phi - phi P† chi) mu|
};

GreenIdentityReport check_green_identity(const WaveOperator& op,
                                         const GridField& phi,
                                         const GridField& chi);

// Node-sum quadrature of a*b against the metric volume density.
double pair_mu(const GridField& a, const GridField& b);

// Quadrature of a*b*mu over a causal region (u = 0 nodes at half weight for
// J+ / J-).
double pair_mu_region(const GridField& a, const GridField& b, CausalRegion D);

// Discrete C^2 norm: max over interior nodes of the field and its first and
// second difference quotients.
double c2_norm(const GridField& f);

// Largest |f| outside the 2h-inflated causal region (support-leak scan).
double support_leak(const GridField& f, CausalRegion region, double inflate_h);

}  // namespace charcauchy
