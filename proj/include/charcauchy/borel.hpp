#pragma once

#include "charcauchy/propagation.hpp"

namespace charcauchy {

enum class MuRule { unit, appendix_style };

// Parameters of the truncated cutoff-weighted Taylor extension
//   phi_app(u, v) = sum_{n=0}^{N} sigma(mu_n u / delta) u^n/n! psi_n(v).
struct ExtensionConfig {
  double delta = 0.0;  // transverse support scale; <= 0 picks the default
  MuRule mu_rule = MuRule::unit;
  int n_jet = 6;
  int sigma_profile = 1;

  double effective_delta(const SlabGrid& grid) const;
};

// Smooth field whose transverse jets on u = 0 reproduce the sequence exactly
// up to order n_jet; supported in |u| <= delta/2.
GridField borel_extend(const JetSequence& jets, const ExtensionConfig& cfg,
                       const SlabGrid& grid);

// e(f)(u, v) = sigma(u/delta_e) f(v): trace f on N, support in J(supp f).
GridField simple_extension(const CharacteristicDatum& f, double delta_e,
                           const SlabGrid& grid, int sigma_profile = 1);

}  // namespace charcauchy
