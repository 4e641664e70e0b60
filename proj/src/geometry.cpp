#include "charcauchy/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "charcauchy/numerics.hpp"

namespace charcauchy {

double SlabSpacetime::conformal_factor(double u, double v) const {
  if (metric == MetricKind::minkowski) return 1.0;
  const double w = omega(u, v);
  if (!(w > 0.0))
    throw std::runtime_error("conformal factor must be positive at (" +
                             std::to_string(u) + ", " + std::to_string(v) + ")");
  return w;
}

double SlabSpacetime::density_weight(double u, double v) const {
  return 0.5 * conformal_factor(u, v);
}

double SlabSpacetime::inverse_uv(double u, double v) const {
  return 2.0 / conformal_factor(u, v);
}

bool SlabSpacetime::in_slab(double u, double v) const {
  const double t = 0.5 * (u + v);
  const double eps = 1e-9 * (1.0 + t_max - t_min);
  return t >= t_min - eps && t <= t_max + eps;
}

SlabGrid build_grid(const SlabSpacetime& st, double h, double u_halfwidth,
                    double v_lo, double v_hi) {
  if (!(h > 0.0)) throw std::invalid_argument("nonpositive-h: grid spacing must be > 0");
  if (!(st.t_min < st.t_max))
    throw std::invalid_argument("slab requires t_min < t_max");
  if (!(v_lo < v_hi)) throw std::invalid_argument("empty v range");
  SlabGrid g;
  g.spacetime = st;
  g.h = h;
  g.i_zero = static_cast<int>(std::lround(u_halfwidth / h));
  if (g.i_zero < 1)
    throw std::invalid_argument("u_halfwidth too small for the grid spacing");
  g.nu = 2 * g.i_zero + 1;
  g.nv = static_cast<int>(std::lround((v_hi - v_lo) / h)) + 1;
  if (g.nv < 3) throw std::invalid_argument("v range too small for the grid spacing");
  g.v_min = v_lo;
  for (int ci : {0, g.nu - 1}) {
    for (int cj : {0, g.nv - 1}) {
      if (!st.in_slab(g.u(ci), g.v(cj)))
        throw std::invalid_argument(
            "range-outside-slab: node (u=" + std::to_string(g.u(ci)) +
            ", v=" + std::to_string(g.v(cj)) + ") leaves the slab");
    }
  }
  return g;
}

bool classify(const SlabSpacetime& st, double u, double v, CausalRegion region) {
  if (!st.in_slab(u, v))
    throw std::invalid_argument("point-outside-slab: (u=" + std::to_string(u) +
                                ", v=" + std::to_string(v) + ")");
  const bool in_plus = u >= 0.0 && v > 2.0 * st.t_min;
  const bool in_minus = u <= 0.0 && v < 2.0 * st.t_max;
  switch (region) {
    case CausalRegion::Jplus: return in_plus;
    case CausalRegion::Jminus: return in_minus;
    case CausalRegion::J: return in_plus || in_minus;
    case CausalRegion::Exterior: return !(in_plus || in_minus);
  }
  return false;
}

const char* region_name(CausalRegion region) {
  switch (region) {
    case CausalRegion::Jplus: return "Jplus";
    case CausalRegion::Jminus: return "Jminus";
    case CausalRegion::J: return "J";
    case CausalRegion::Exterior: return "exterior";
  }
  return "?";
}

double indicator_weight(const SlabGrid& grid, int i, int j, CausalRegion region) {
  const double u = grid.u(i);
  const double v = grid.v(j);
  if (!classify(grid.spacetime, u, v, region)) return 0.0;
  if (region == CausalRegion::J || region == CausalRegion::Exterior) return 1.0;
  // nodes on N are shared between J+ and J-
  return i == grid.i_zero ? 0.5 : 1.0;
}

DensityOnN interior_product_density(std::span<const double> alpha,
                                    const SlabGrid& grid) {
  if (static_cast<int>(alpha.size()) != grid.nv)
    throw std::invalid_argument("alpha sample count must match the v grid");
  DensityOnN d;
  d.ns = grid.nv;
  d.ny = 1;
  d.weight.resize(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    if (!(alpha[j] > 0.0))
      throw std::invalid_argument("alpha must be positive everywhere on N");
    d.weight[j] = grid.spacetime.density_weight(0.0, grid.v(j)) / alpha[j];
  }
  return d;
}

// ---------------------------------------------------------------------------
// Generic hypersurface machinery
// ---------------------------------------------------------------------------
namespace {

double det(std::vector<double> m, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r * n + c]) > std::fabs(m[p * n + c])) p = r;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(m[c * n + k], m[p * n + k]);
      d = -d;
    }
    const double piv = m[c * n + c];
    if (piv == 0.0) return 0.0;
    d *= piv;
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / piv;
      for (int k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return d;
}

using MetricAt = std::function<std::vector<double>(double, std::span<const double>,
                                                   std::span<const double>)>;

std::vector<double> chart_tangent(const HypersurfaceParam& hs, double s,
                                  std::span<const double> y, int axis) {
  // axis 0 = s, axis k >= 1 = y_{k-1}; 4th-order centered differences
  const double d = hs.fd_step;
  auto point = [&](double offset) {
    if (axis == 0) return hs.chart(s + offset, y);
    std::vector<double> yy(y.begin(), y.end());
    yy[axis - 1] += offset;
    return hs.chart(s, yy);
  };
  const auto pm2 = point(-2 * d), pm1 = point(-d), pp1 = point(d), pp2 = point(2 * d);
  std::vector<double> t(hs.dim);
  for (int c = 0; c < hs.dim; ++c)
    t[c] = (pm2[c] - 8.0 * pm1[c] + 8.0 * pp1[c] - pp2[c]) / (12.0 * d);
  return t;
}

double dot(const std::vector<double>& g, std::span<const double> x,
           std::span<const double> y, int n) {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += g[a * n + b] * x[a] * y[b];
  return s;
}

double weight_at(const HypersurfaceParam& hs, const MetricAt& metric_at,
                 double s, std::span<const double> y) {
  const int n = hs.dim;
  const auto point = hs.chart(s, y);
  const auto g = metric_at(s, y, point);

  std::vector<std::vector<double>> frame;
  frame.push_back(chart_tangent(hs, s, y, 0));  // generator T = d/ds
  for (int k = 1; k < n - 1; ++k) frame.push_back(chart_tangent(hs, s, y, k));
  const auto& T = frame[0];

  double gscale = 0.0, tscale = 0.0;
  for (double x : g) gscale = std::max(gscale, std::fabs(x));
  for (double x : T) tscale = std::max(tscale, std::fabs(x));
  const double scale = (1.0 + gscale) * (1.0 + tscale) * (1.0 + tscale);

  if (std::fabs(dot(g, T, T, n)) > hs.adapted_tol * scale)
    throw std::runtime_error("adaptedness check failed: generator not null");
  for (std::size_t k = 1; k < frame.size(); ++k) {
    double yscale = 0.0;
    for (double x : frame[k]) yscale = std::max(yscale, std::fabs(x));
    if (std::fabs(dot(g, T, frame[k], n)) >
        hs.adapted_tol * scale * (1.0 + yscale))
      throw std::runtime_error(
          "adaptedness check failed: generator not orthogonal to cross-section");
  }

  // transverse vector Theta with n(Theta) = g(T, Theta) = 1
  std::vector<double> theta(n, 0.0);
  {
    int best = -1;
    double best_c = 0.0;
    for (int m = 0; m < n; ++m) {
      std::vector<double> e(n, 0.0);
      e[m] = 1.0;
      const double c = dot(g, T, e, n);
      if (std::fabs(c) > std::fabs(best_c)) {
        best = m;
        best_c = c;
      }
    }
    if (best < 0 || std::fabs(best_c) < 1e-12 * scale)
      throw std::runtime_error("could not find a transverse direction");
    theta[best] = 1.0 / best_c;
  }

  // w = mu_g(T, Y_1..Y_{d-1}, Theta)
  std::vector<double> cols(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < frame.size(); ++c) cols[r * n + c] = frame[c][r];
    cols[r * n + (n - 1)] = theta[r];
  }
  return std::sqrt(std::fabs(det(g, n))) * std::fabs(det(cols, n));
}

DensityOnN weight_field(const HypersurfaceParam& hs, const MetricAt& metric_at) {
  DensityOnN w;
  w.ns = static_cast<int>(hs.s_samples.size());
  w.ny = static_cast<int>(hs.y_points.size());
  w.weight.resize(static_cast<std::size_t>(w.ns) * w.ny);
  for (int p = 0; p < w.ny; ++p)
    for (int k = 0; k < w.ns; ++k)
      w.at(p, k) = weight_at(hs, metric_at, hs.s_samples[k], hs.y_points[p]);
  return w;
}

MetricAt base_metric(const HypersurfaceParam& hs) {
  return [&hs](double, std::span<const double>, std::span<const double> point) {
    return hs.metric(point);
  };
}

DensityOnN expansion_from_weight(const HypersurfaceParam& hs, const DensityOnN& w,
                                 const std::function<double(double, std::span<const double>)>& alpha) {
  if (w.ns < 5)
    throw std::invalid_argument("expansion_density: need >= 5 s-samples");
  const double ds = hs.s_samples[1] - hs.s_samples[0];
  DensityOnN out;
  out.ns = w.ns;
  out.ny = w.ny;
  out.weight.resize(w.weight.size());
  std::vector<double> row(w.ns);
  for (int p = 0; p < w.ny; ++p) {
    int sign = 0;
    for (int k = 0; k < w.ns; ++k) {
      const double a = alpha(hs.s_samples[k], hs.y_points[p]);
      if (a == 0.0 || (sign != 0 && sign != (a > 0.0 ? 1 : -1)))
        throw std::invalid_argument(
            "nonpositive-alpha: conormal rescaling must be nowhere zero and of one sign");
      sign = a > 0.0 ? 1 : -1;
      // weight of iota_{alpha n} mu in the base chart, then the Lie
      // derivative along alpha * d/ds
      const double rescaled = w.at(p, k) / std::fabs(a);
      row[k] = a * rescaled;
    }
    const auto d = derivative_samples(row, ds);
    for (int k = 0; k < w.ns; ++k) out.at(p, k) = d[k];
  }
  return out;
}

}  // namespace

DensityOnN adapted_weight(const HypersurfaceParam& hs) {
  return weight_field(hs, base_metric(hs));
}

DensityOnN expansion_density(
    const HypersurfaceParam& hs,
    const std::function<double(double, std::span<const double>)>& alpha) {
  return expansion_from_weight(hs, weight_field(hs, base_metric(hs)), alpha);
}

ConformalScalingReport conformal_scaling_check(
    const HypersurfaceParam& hs,
    const std::function<double(double, std::span<const double>)>& lambda) {
  const double ds = hs.s_samples[1] - hs.s_samples[0];
  for (const auto& y : hs.y_points) {
    for (std::size_t k = 1; k + 1 < hs.s_samples.size(); ++k) {
      const double lm = lambda(hs.s_samples[k - 1], y);
      const double l0 = lambda(hs.s_samples[k], y);
      const double lp = lambda(hs.s_samples[k + 1], y);
      if (!(l0 > 0.0))
        throw std::invalid_argument("conformal factor must be positive");
      if (std::fabs(lp - lm) / (2.0 * ds) > 1e-8 * (1.0 + std::fabs(l0)))
        throw std::invalid_argument(
            "lambda-varies-along-generators: conformal factor must be constant "
            "along null generators");
    }
  }

  auto unit = [](double, std::span<const double>) { return 1.0; };
  const DensityOnN base = expansion_density(hs, unit);

  MetricAt scaled = [&](double s, std::span<const double> y,
                        std::span<const double> point) {
    auto g = hs.metric(point);
    const double l = lambda(s, y);
    for (double& x : g) x *= l;
    return g;
  };
  const DensityOnN rescaled =
      expansion_from_weight(hs, weight_field(hs, scaled), unit);

  ConformalScalingReport rep;
  rep.exponent = 0.5 * (hs.dim - 2);

  const DensityOnN w = adapted_weight(hs);
  double wmax = 0.0;
  for (double x : w.weight) wmax = std::max(wmax, std::fabs(x));
  const double srange =
      hs.s_samples.back() - hs.s_samples.front();
  double denom = wmax / std::max(srange, 1e-30);
  double maxdiff = 0.0;
  for (int p = 0; p < base.ny; ++p) {
    for (int k = 0; k < base.ns; ++k) {
      const double expected =
          std::pow(lambda(hs.s_samples[k], hs.y_points[p]), rep.exponent) *
          base.at(p, k);
      maxdiff = std::max(maxdiff, std::fabs(rescaled.at(p, k) - expected));
      denom = std::max(denom, std::fabs(expected));
    }
  }
  rep.max_rel_error = maxdiff / denom;
  return rep;
}

HypersurfaceParam slab_null_line(const SlabSpacetime& st, double v_lo,
                                 double v_hi, int ns) {
  if (st.metric != MetricKind::minkowski)
    throw std::invalid_argument("slab_null_line: Minkowski slab required");
  HypersurfaceParam hs;
  hs.dim = 2;
  // n = du, n-sharp = 2 d/dv, so v = v_lo + 2s along the single generator
  hs.chart = [v_lo](double s, std::span<const double>) {
    return std::vector<double>{0.0, v_lo + 2.0 * s};
  };
  hs.metric = [](std::span<const double>) {
    return std::vector<double>{0.0, 0.5, 0.5, 0.0};
  };
  const double s_max = 0.5 * (v_hi - v_lo);
  hs.s_samples.resize(ns);
  for (int k = 0; k < ns; ++k) hs.s_samples[k] = s_max * k / (ns - 1);
  hs.y_points = {{}};
  return hs;
}

HypersurfaceParam minkowski_light_cone(
    double r_lo, double r_hi, int ns,
    const std::vector<std::vector<double>>& directions) {
  HypersurfaceParam hs;
  hs.dim = 4;
  hs.chart = [](double s, std::span<const double> y) {
    const double th = y[0], ph = y[1];
    return std::vector<double>{s, s * std::sin(th) * std::cos(ph),
                               s * std::sin(th) * std::sin(ph),
                               s * std::cos(th)};
  };
  hs.metric = [](std::span<const double>) {
    return std::vector<double>{1, 0, 0, 0, 0, -1, 0, 0,
                               0, 0, -1, 0, 0, 0, 0, -1};
  };
  hs.s_samples.resize(ns);
  for (int k = 0; k < ns; ++k)
    hs.s_samples[k] = r_lo + (r_hi - r_lo) * k / (ns - 1);
  hs.y_points = directions;
  return hs;
}

std::vector<double> slab_line_expansion_term(const SlabGrid& grid) {
  // (1/iota_w) d/dv [ nsharp_v * iota_w ] with nsharp_v = g^{vu},
  // iota_w = |det g|^{1/2}
  std::vector<double> prod(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    const double v = grid.v(j);
    prod[j] = grid.spacetime.inverse_uv(0.0, v) *
              grid.spacetime.density_weight(0.0, v);
  }
  auto d = derivative_samples(prod, grid.h);
  for (int j = 0; j < grid.nv; ++j)
    d[j] /= grid.spacetime.density_weight(0.0, grid.v(j));
  return d;
}

}  // namespace charcauchy
