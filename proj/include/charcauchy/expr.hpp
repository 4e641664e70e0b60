#pragma once

#include <memory>
#include <string>
#include <vector>

namespace charcauchy {

// Small arithmetic expression language over the null coordinates:
//   identifiers u, v; operators + - * / ^ (integer exponents); functions
//   sin, cos, exp, and bump(x, center, width) — a compactly supported bump
//   with value 1 at x = center and support radius `width`.
//
// Besides plain evaluation, an expression can produce its truncated Taylor
// expansion in u about u = 0 at fixed v, which is how transverse jets of
// configured coefficients and inhomogeneities are obtained exactly.
class Expr {
 public:
  struct Node;

  // Throws std::invalid_argument with a position diagnostic on parse errors.
  static Expr parse(const std::string& text);

  double operator()(double u, double v) const;

  // Taylor coefficients in u about (0, v): result[k] = (d^k/du^k) expr / k!,
  // k = 0..order.
  std::vector<double> u_series(double v, int order) const;

  bool depends_on_u() const;
  bool depends_on_v() const;

  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace charcauchy
