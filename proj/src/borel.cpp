#include "charcauchy/borel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"

namespace charcauchy {

double ExtensionConfig::effective_delta(const SlabGrid& grid) const {
  if (delta > 0.0) return delta;
  return 0.9 * std::min(1.0, grid.u_halfwidth());
}

namespace {

void check_delta(double delta, const SlabGrid& grid) {
  if (!(delta > 0.0) || 0.5 * delta > grid.u_halfwidth())
    throw std::invalid_argument(
        "delta too large: transverse support must fit inside the grid");
}

// mu_n selection following the convergent-sum recipe, with beta_k = 2^k and
// unit combinatorial constants standing in for the abstract ones; only used
// behind the appendix_style flag (a finite sum needs no convergence control).
std::vector<double> mu_factors(const JetSequence& jets, double h, MuRule rule) {
  const int n = jets.order;
  std::vector<double> mu(n + 1, 1.0);
  if (rule == MuRule::unit) return mu;
  std::vector<double> sigma_norm(n + 1, 1.0);
  for (int l = 1; l <= n; ++l)
    sigma_norm[l] = sigma_norm[l - 1] * 8.0;  // growth proxy for |sigma|_{C^l}
  for (int r = 1; r <= n; ++r) {
    // discrete C^k norms of psi_r up to k = r-1
    std::vector<double> row = jets.psi[r];
    double sum = 0.0;
    double two_k = 1.0, beta_k = 1.0;
    for (int k = 0; k <= r - 1; ++k) {
      double norm = 0.0;
      for (double x : row) norm = std::max(norm, std::fabs(x));
      sum += two_k * beta_k * norm;
      if (k < r - 1) row = derivative_samples(row, h);
      two_k *= 2.0;
      beta_k *= 2.0;
    }
    double factorial = 1.0;
    for (int i = 2; i <= r; ++i) factorial *= i;
    const double alpha_r = std::pow(2.0, -r);
    mu[r] = 1.0 + sigma_norm[r - 1] * sum / (factorial * alpha_r);
  }
  return mu;
}

}  // namespace

GridField borel_extend(const JetSequence& jets, const ExtensionConfig& cfg,
                       const SlabGrid& grid) {
  if (static_cast<int>(jets.psi[0].size()) != grid.nv)
    throw std::invalid_argument("jet samples must match the v grid");
  const double delta = cfg.effective_delta(grid);
  check_delta(delta, grid);
  const int n_jet = std::min(cfg.n_jet, jets.order);
  const std::vector<double> mu = mu_factors(jets, grid.h, cfg.mu_rule);

  GridField out = make_field(grid);
  for (int i = 0; i < grid.nu; ++i) {
    const double u = grid.u(i);
    if (std::fabs(u) >= 0.5 * delta) continue;
    double u_pow = 1.0;  // u^n / n!
    for (int n = 0; n <= n_jet; ++n) {
      const double cut = plateau_cutoff(mu[n] * u / delta, cfg.sigma_profile);
      if (cut != 0.0) {
        const double c = cut * u_pow;
        for (int j = 0; j < grid.nv; ++j) out.at(i, j) += c * jets.psi[n][j];
      }
      u_pow *= u / (n + 1);
    }
  }
  return out;
}

GridField simple_extension(const CharacteristicDatum& f, double delta_e,
                           const SlabGrid& grid, int sigma_profile) {
  if (static_cast<int>(f.f.size()) != grid.nv)
    throw std::invalid_argument("datum samples must match the v grid");
  check_delta(delta_e, grid);
  GridField out = make_field(grid);
  for (int i = 0; i < grid.nu; ++i) {
    const double cut = plateau_cutoff(grid.u(i) / delta_e, sigma_profile);
    if (cut == 0.0) continue;
    for (int j = 0; j < grid.nv; ++j) out.at(i, j) = cut * f.f[j];
  }
  return out;
}

}  // namespace charcauchy
