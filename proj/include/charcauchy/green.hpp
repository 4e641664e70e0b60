#pragma once

#include <optional>
#include <vector>

#include "charcauchy/operators.hpp"
#include "charcauchy/propagation.hpp"

namespace charcauchy {

// Density weight w(v) on N representing the single layer rho = w |dv|.
struct SingleLayer {
  std::vector<double> weight;
  int orientation = +1;  // sign of the conormal; the layer itself is even in it

  // delta_{N,n} for n = du: the iota_n mu_g weight.
  static SingleLayer delta(const SlabGrid& grid);
};

enum class GreenDirection { retarded, advanced, causal };

// Normalisation of the single-layer trace equation
//   4 d/dv tau + A(0,v) tau = 2 * c * w(v).
// Pinned by the smeared-delta refinement test in tests/test_green.cpp.
inline constexpr double single_layer_norm = 1.0;

// Characteristic (Goursat) marching solution of P phi = source with phi = 0
// before (after) the source.  When `mask` is given, the source is multiplied
// by the region indicator evaluated at cell centres.  The source must vanish
// at the inflow boundary.
GridField retarded_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask = std::nullopt);
GridField advanced_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask = std::nullopt);

// G = G_+ - G_-.
GridField causal_green(const WaveOperator& op, const GridField& source,
                       std::optional<CausalRegion> mask = std::nullopt);

// One-sided pieces of the Green operator applied to a single layer on N.
// `retarded` vanishes on u < 0 and carries the trace tau_+ on the u = 0 row;
// `advanced` vanishes on u > 0 and carries tau_-.
struct SingleLayerParts {
  GridField retarded;
  GridField advanced;
  std::vector<double> trace_plus;
  std::vector<double> trace_minus;
};

SingleLayerParts solve_single_layer_parts(const WaveOperator& op,
                                          const SingleLayer& layer,
                                          const SlabGrid& grid);

GridField green_single_layer(const WaveOperator& op, const SingleLayer& layer,
                             GreenDirection direction, const SlabGrid& grid);

namespace serial {
// Row-by-row reference marching; bit-identical to the wavefront kernels.
GridField retarded_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask = std::nullopt);
GridField advanced_solve(const WaveOperator& op, const GridField& source,
                         std::optional<CausalRegion> mask = std::nullopt);
}  // namespace serial

}  // namespace charcauchy
