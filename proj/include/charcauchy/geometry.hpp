#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace charcauchy {

enum class MetricKind { minkowski, conformal };

// Temporal slab t_min < t < t_max in 1+1 dimensions, in null coordinates
// u = t - x, v = t + x.  The metric is g = du dv (Minkowski) or
// g = Omega(u,v) du dv (conformal, Omega > 0).
struct SlabSpacetime {
  double t_min = 0.0;
  double t_max = 1.0;
  MetricKind metric = MetricKind::minkowski;
  std::function<double(double, double)> omega;  // used when metric == conformal

  double conformal_factor(double u, double v) const;
  // |det g|^{1/2} = Omega/2; the weight of the volume density in |du dv|.
  double density_weight(double u, double v) const;
  // g^{uv} = 2/Omega.
  double inverse_uv(double u, double v) const;
  bool in_slab(double u, double v) const;
};

// Uniform null grid with equal spacing in u and v.  The line u = 0 is a grid
// line by construction: u_i = (i - i_zero) * h exactly.
struct SlabGrid {
  SlabSpacetime spacetime;
  double h = 0.0;
  int nu = 0, nv = 0;
  int i_zero = 0;     // index of the u = 0 line
  double v_min = 0.0;

  double u(int i) const { return (i - i_zero) * h; }
  double v(int j) const { return v_min + j * h; }
  double u_halfwidth() const { return i_zero * h; }
  double v_max() const { return v_min + (nv - 1) * h; }
  std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }
};

SlabGrid build_grid(const SlabSpacetime& st, double h, double u_halfwidth,
                    double v_lo, double v_hi);

enum class CausalRegion { Jplus, Jminus, J, Exterior };

// Indicator of the causal region attached to the null line N = {u = 0}:
//   J+ = {u >= 0, v > 2 t_min},  J- = {u <= 0, v < 2 t_max},
//   J = J+ u J-, Exterior the complement.  N belongs to both J+ and J-.
// Throws if the point is outside the (closed) slab.
bool classify(const SlabSpacetime& st, double u, double v, CausalRegion region);

const char* region_name(CausalRegion region);

// Weight of a node in a quadrature over the closed region: 1 inside, 1/2 on
// the u = 0 line (shared between J+ and J-), 0 outside.
double indicator_weight(const SlabGrid& grid, int i, int j, CausalRegion region);

// Density on a parametrised hypersurface: weight samples w(s, y) representing
// w |ds dy_1 ... dy_{d-1}|, stored per y-point row.
struct DensityOnN {
  int ns = 0;
  int ny = 1;
  std::vector<double> weight;  // weight[p * ns + k] at (s_k, y_p)
  double at(int p, int k) const { return weight[static_cast<std::size_t>(p) * ns + k]; }
  double& at(int p, int k) { return weight[static_cast<std::size_t>(p) * ns + k]; }
};

// iota_n mu_g on the null line for conormal n = alpha(v) du: weight
// rho(0,v)/alpha(v) in |dv|, where rho is the metric density weight.
DensityOnN interior_product_density(std::span<const double> alpha,
                                    const SlabGrid& grid);

// Generator-adapted parametrisation of a null hypersurface in an arbitrary
// ambient dimension.  The s-coordinate curves are the null generators and
// d(chart)/ds is declared to equal n-sharp for the base conormal n; this is
// checked numerically.
struct HypersurfaceParam {
  int dim = 2;  // ambient dimension d+1
  // ambient coordinates of the point (s, y)
  std::function<std::vector<double>(double, std::span<const double>)> chart;
  // ambient metric components (row-major (d+1)x(d+1)) at an ambient point
  std::function<std::vector<double>(std::span<const double>)> metric;
  std::vector<double> s_samples;               // uniform in s
  std::vector<std::vector<double>> y_points;   // sample cross-section points
  double fd_step = 1e-4;
  double adapted_tol = 1e-8;
};

// Adapted weight w(s,y) of iota_n mu_g for the declared conormal.
DensityOnN adapted_weight(const HypersurfaceParam& hs);

// Expansion density for the conormal choice alpha * n (alpha nowhere zero and
// of one sign; a uniformly negative alpha reverses orientation and flips the
// sign of the result).  Returned in the base chart's |ds dy|.
DensityOnN expansion_density(
    const HypersurfaceParam& hs,
    const std::function<double(double, std::span<const double>)>& alpha);

struct ConformalScalingReport {
  double max_rel_error = 0.0;
  double exponent = 0.0;  // (d-1)/2
};

// Recomputes the expansion density under g' = lambda * g (lambda constant
// along generators) and compares with lambda^{(d-1)/2} times the base result.
ConformalScalingReport conformal_scaling_check(
    const HypersurfaceParam& hs,
    const std::function<double(double, std::span<const double>)>& lambda);

// The null line u = 0 of a slab, parametrised so that d/ds = n-sharp for
// n = du.  Minkowski slabs only (the conformal line enters through
// slab_line_expansion_term below).
HypersurfaceParam slab_null_line(const SlabSpacetime& st, double v_lo,
                                 double v_hi, int ns);

// Outgoing light cone t = r in 3+1 Minkowski, generator parameter s = r,
// sampled at the given (theta, phi) directions.
HypersurfaceParam minkowski_light_cone(double r_lo, double r_hi, int ns,
                                       const std::vector<std::vector<double>>& directions);

// div_{iota_n mu} n-sharp on the slab null line, per v-grid node, computed
// from the coordinate formula for the Lie derivative of the adapted weight.
// Identically zero in 1+1; kept as a computed quantity so the first-order
// boundary operators stay wired to the geometry.
std::vector<double> slab_line_expansion_term(const SlabGrid& grid);

}  // namespace charcauchy
