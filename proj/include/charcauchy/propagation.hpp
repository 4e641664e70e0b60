#pragma once

#include <functional>
#include <span>
#include <vector>

#include "charcauchy/operators.hpp"

namespace charcauchy {

// Characteristic datum f on N = {u = 0}: samples on the v grid with a
// declared compact support [v_a, v_b].
struct CharacteristicDatum {
  std::vector<double> f;
  double v_a = 0.0, v_b = 0.0;

  static CharacteristicDatum zero(const SlabGrid& grid);
  static CharacteristicDatum from_function(const SlabGrid& grid,
                                           const std::function<double(double)>& fn,
                                           double v_a, double v_b);
};

// Right-hand side F with transverse jet access on N and declared v-support
// bounds; supp F must lie in J(N).
struct Inhomogeneity {
  Coefficient F;
  double v_lo = 0.0, v_hi = 0.0;
  bool zero = true;

  static Inhomogeneity none();
  static Inhomogeneity from_coefficient(Coefficient F, double v_lo, double v_hi);
};

enum class JetType { future, past };

// Transverse jets psi_r = d^r/du^r phi on N, r = 0..order, of the given type.
struct JetSequence {
  int order = 0;
  JetType type = JetType::future;
  double cross_section_v = 0.0;
  std::vector<std::vector<double>> psi;   // psi[r][j]
  std::vector<std::vector<double>> dpsi;  // d/dv psi[r][j], kept for reuse
};

// The order-r propagation ODE along the generator:
//   4 d/dv psi_{r+1} + kappa psi_{r+1} = rhs(psi_0..psi_r)
// with kappa = A(0, v) and rhs assembled by the Leibniz expansion of
// d^r/du^r applied to the equation.
struct TowerOde {
  std::vector<double> kappa;
  std::function<std::vector<double>(
      const std::vector<std::vector<double>>& psi,
      const std::vector<std::vector<double>>& dpsi)>
      rhs;
};

TowerOde assemble_tower(const WaveOperator& op, const Inhomogeneity& F, int r,
                        const SlabGrid& grid);

JetSequence solve_propagation(const WaveOperator& op,
                              const CharacteristicDatum& f,
                              const Inhomogeneity& F, JetType type, int n_jet,
                              const SlabGrid& grid, int margin_steps = 5);

// Delta_r = sup_v |psi_r^future - psi_r^past|.
std::vector<double> jump_table(const JetSequence& future, const JetSequence& past);

// RK4 march of 4 y' + kappa y = rhs from the start index outward; y = 0 at and
// before (after, for dir < 0) the start.  Half-step values by cubic
// interpolation of the samples.
std::vector<double> ode_march(std::span<const double> kappa,
                              std::span<const double> rhs, double h, int start,
                              int dir);

}  // namespace charcauchy
