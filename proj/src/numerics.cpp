#include "charcauchy/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace charcauchy {

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
  // Fornberg, Math. Comp. 51 (1988); weights for derivatives 0..m, we keep
  // only order m.
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < m) throw std::invalid_argument("fd_weights: not enough nodes");
  std::vector<std::vector<double>> c(nodes.size(),
                                     std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][m];
  return w;
}

namespace {

std::vector<double> stencil_offsets(int lo, int hi) {
  std::vector<double> xs;
  for (int k = lo; k <= hi; ++k) xs.push_back(static_cast<double>(k));
  return xs;
}

}  // namespace

std::vector<double> derivative_samples(std::span<const double> f, double h) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  if (n < 5) throw std::invalid_argument("derivative_samples: need >= 5 samples");
  std::vector<double> out(n);
  static const std::vector<double> centered =
      fd_weights(0.0, stencil_offsets(-2, 2), 1);
  for (std::ptrdiff_t j = 2; j < n - 2; ++j) {
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) s += centered[k + 2] * f[j + k];
    out[j] = s / h;
  }
  // one-sided ends, same order
  for (std::ptrdiff_t j : {std::ptrdiff_t(0), std::ptrdiff_t(1), n - 2, n - 1}) {
    const std::ptrdiff_t base = std::min(std::max<std::ptrdiff_t>(j - 2, 0), n - 5);
    const auto w = fd_weights(static_cast<double>(j - base),
                              stencil_offsets(0, 4), 1);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * f[base + k];
    out[j] = s / h;
  }
  return out;
}

double midpoint_value(std::span<const double> f, std::ptrdiff_t j) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
  if (n < 4) throw std::invalid_argument("midpoint_value: need >= 4 samples");
  std::ptrdiff_t base = j - 1;
  if (base < 0) base = 0;
  if (base > n - 4) base = n - 4;
  const double x = static_cast<double>(j - base) + 0.5;
  // 4-point Lagrange at offsets 0..3
  double value = 0.0;
  for (int i = 0; i < 4; ++i) {
    double l = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m == i) continue;
      l *= (x - m) / (i - m);
    }
    value += l * f[base + i];
  }
  return value;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double nth_derivative(const std::function<double(double)>& f, double x, int k,
                      double step) {
  if (k == 0) return f(x);
  // balance truncation against roundoff: noise grows like eps / h^k while the
  // stencil is 8th-order accurate, so the optimal spacing scales like
  // eps^(1/(k+8))
  step = std::max(step, std::pow(2.3e-16, 1.0 / (k + 8)));
  const int m = (k + 6) / 2;
  const auto offsets = stencil_offsets(-m, m);
  const auto w = fd_weights(0.0, offsets, k);
  auto apply = [&](double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i)
      s += w[i] * f(x + offsets[i] * h);
    return s / std::pow(h, k);
  };
  // extrapolate from the coarser pair (2h, h): halving below the balanced
  // step would amplify rounding noise instead of reducing truncation
  const double d1 = apply(2.0 * step);
  const double d2 = apply(step);
  const double p = 64.0;  // stencil accuracy is >= 6
  return (p * d2 - d1) / (p - 1.0);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

namespace {

double exp_kernel(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smoothstep(double x, int profile) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double m = exp_kernel(x);
  double s = m / (m + exp_kernel(1.0 - x));
  double out = s;
  for (int i = 1; i < profile; ++i) out *= s;
  return out;
}

double plateau_cutoff(double t, int profile) {
  const double a = std::fabs(t);
  if (a <= 0.25) return 1.0;
  if (a >= 0.5) return 0.0;
  return smoothstep((0.5 - a) / 0.25, profile);
}

double unit_bump(double z) {
  if (std::fabs(z) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

}  // namespace charcauchy
