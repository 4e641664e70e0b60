#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "charcauchy/solver.hpp"

namespace charcauchy {

// Seeded family of smooth compactly supported test functions with randomized
// centres, widths and polynomial modulations; every member vanishes on the
// outer 3-node ring.
struct TestFunctionBattery {
  std::vector<GridField> members;
  std::vector<double> c2_norms;
  std::uint64_t seed = 0;

  // margin > 0 fixes the boundary clearance in physical units (so batteries
  // at different grid levels sample the same member distribution); otherwise
  // the clearance is 4h.
  static TestFunctionBattery make(const SlabGrid& grid, int size,
                                  std::uint64_t seed, double margin = -1.0);
};

struct ResidualReport {
  double max_residual = 0.0;
  std::vector<double> per_member;
};

// Checks the divergence-theorem form of the boundary jump identity on D:
//   ∫_D div j[chi, Phi] mu  =  ∫_N [chi n#Phi - Phi n#chi + Phi chi n(X)] iota_n mu
// with n the outward conormal of D (D = J+ or J-).
ResidualReport verify_jump_formula(const WaveOperator& op, CausalRegion D,
                                   const GridField& Phi,
                                   const TestFunctionBattery& battery);

// Checks <[[1_D], P] Phi, chi mu> = <S(T_{N,n} Phi|_N), chi mu>, the left side
// evaluated as ∫_D (chi P Phi - Phi P† chi) mu.  n is outward for D.
ResidualReport verify_T_identity(const WaveOperator& op, const GridField& Phi,
                                 const TestFunctionBattery& battery,
                                 CausalRegion D = CausalRegion::Jminus);

// Checks <P(Phi 1_D), chi mu> = -<T(Phi delta_N), chi mu> for Phi an
// approximate kernel element on D (from a homogeneous solve), the right side
// evaluated adjoint-side through T†.
ResidualReport verify_second_jump(const WaveOperator& op,
                                  const CharacteristicDatum& f,
                                  const TestFunctionBattery& battery,
                                  const SolverConfig& cfg,
                                  CausalRegion D = CausalRegion::Jminus);

// Boundary-operator weight {2 n#phi + [n(X) + div term] phi} iota_n mu on the
// v grid, for the conormal that is outward for D.  Exposed for the
// consistency tests.
std::vector<double> boundary_T_weight(const WaveOperator& op,
                                      const SlabGrid& grid,
                                      std::span<const double> phi_trace,
                                      CausalRegion D,
                                      bool include_expansion_term = true);

struct EquivarianceReport {
  double max_rel_error = 0.0;
};

// Pairing form of the conformal equivariance of S o T for tangent X (A = 0):
// g' = lambda g with lambda constant along the generators.
EquivarianceReport verify_equivariance(const WaveOperator& op,
                                       std::span<const double> lambda,
                                       std::span<const double> phi_N,
                                       const TestFunctionBattery& battery);

struct IndependenceReport {
  double max_distance = 0.0;
  std::vector<double> pairwise;
};

// Pairwise sup-norm distances between merged solutions across config
// variants.
IndependenceReport independence_suite(const WaveOperator& op,
                                      const CharacteristicDatum& f,
                                      const Inhomogeneity& F,
                                      const std::vector<SolverConfig>& variants,
                                      const SlabGrid& grid,
                                      SolvePath path = SolvePath::rendall);

struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  double observed_order = 0.0;  // 0 for the first row
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;
};

// Errors of a problem at each grid level; the caller supplies the
// error-vs-reference functional.
ConvergenceStudy convergence_study(const std::function<double(double)>& error_at_h,
                                   std::span<const double> h_list);

}  // namespace charcauchy
