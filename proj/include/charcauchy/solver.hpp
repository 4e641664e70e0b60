#pragma once

#include <string>
#include <vector>

#include "charcauchy/borel.hpp"
#include "charcauchy/green.hpp"
#include "charcauchy/propagation.hpp"

namespace charcauchy {

enum class SolvePath { rendall, representation, final_formula };

const char* path_name(SolvePath p);

struct SolverConfig {
  int n_jet = 6;
  double delta = 0.0;    // Borel transverse scale; <= 0 means auto
  double delta_e = 0.0;  // simple-extension scale; <= 0 means auto
  MuRule mu_rule = MuRule::unit;
  int sigma_profile = 1;
  int margin_steps = 5;          // cross-section margin in grid steps
  double tol_reg_factor = 10.0;  // regularity tolerance = factor * h^2 * scale
};

// Two one-sided smooth fields, their merge, and bookkeeping.  `merged` equals
// phi_plus on J+, phi_minus on J-, the shared trace on N and zero outside
// J(N); it is derived data, the one-sided fields are the primary carriers.
struct MergedSolution {
  GridField phi_plus;
  GridField phi_minus;
  GridField merged;
  std::vector<double> trace;
  std::vector<double> jump_report;
  SolvePath path = SolvePath::rendall;
};

struct DataReport {
  bool ok = true;
  std::vector<std::string> failures;
  double f_lo = 0.0, f_hi = 0.0;
  bool scrF_empty = true;
  double scrF_lo = 0.0, scrF_hi = 0.0;  // effective jet-support interval of F
};

DataReport validate_data(const CharacteristicDatum& f, const Inhomogeneity& F,
                         const SlabGrid& grid, int jet_order = 6);

MergedSolution solve_rendall(const WaveOperator& op,
                             const CharacteristicDatum& f,
                             const Inhomogeneity& F, const SolverConfig& cfg,
                             const SlabGrid& grid);

MergedSolution solve_representation(const WaveOperator& op,
                                    const CharacteristicDatum& f,
                                    const Inhomogeneity& F,
                                    const SolverConfig& cfg,
                                    const SlabGrid& grid);

// Homogeneous problems only: G o S o T applied to f.
MergedSolution solve_final_formula(const WaveOperator& op,
                                   const CharacteristicDatum& f,
                                   const SolverConfig& cfg,
                                   const SlabGrid& grid);

MergedSolution solve_path(SolvePath path, const WaveOperator& op,
                          const CharacteristicDatum& f, const Inhomogeneity& F,
                          const SolverConfig& cfg, const SlabGrid& grid);

struct RegularityReport {
  int c_k_class = 0;
  std::vector<double> jump_table;
  double tol = 0.0;
};

// Largest k with Delta_r below tolerance for all r <= k.
RegularityReport regularity_report(const MergedSolution& sol,
                                   const JetSequence& jets_future,
                                   const JetSequence& jets_past,
                                   double data_scale);

// One-sided transverse-derivative jump across N, per v node (2nd-order
// stencils on each side).
std::vector<double> measure_du_jump(const MergedSolution& sol);

// sup |merged_a - merged_b|.
double merged_distance(const MergedSolution& a, const MergedSolution& b);

}  // namespace charcauchy
