#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace charcauchy {

// Finite-difference weights for the m-th derivative at x0 on arbitrary nodes
// (Fornberg's recursion).  f^(m)(x0) ~= sum_i w[i] * f(nodes[i]).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

// Derivative of uniformly spaced samples: 4th-order centered stencils in the
// interior, matching-order one-sided stencils at the ends.
std::vector<double> derivative_samples(std::span<const double> f, double h);

// Value halfway between samples j and j+1 via 4-point Lagrange interpolation
// (stencil clamped near the ends).
double midpoint_value(std::span<const double> f, std::ptrdiff_t j);

double binomial(int n, int k);

// k-th derivative of a scalar callable: 6th-order symmetric stencil plus one
// Richardson step.  `step` is the base spacing.
double nth_derivative(const std::function<double(double)>& f, double x, int k,
                      double step);

// Composite Simpson rule with n subintervals (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

// C^inf step: 0 for x <= 0, 1 for x >= 1.  profile >= 1 selects the
// transition shape (powers of the base exp-step; all are admissible).
double smoothstep(double x, int profile = 1);

// Plateau cutoff sigma: identically 1 on |t| <= 1/4, identically 0 on
// |t| >= 1/2, monotone on each transition interval.
double plateau_cutoff(double t, int profile = 1);

// Compactly supported bump: exp(1 - 1/(1-z^2)) on |z| < 1, zero outside,
// value 1 at z = 0.
double unit_bump(double z);

}  // namespace charcauchy
