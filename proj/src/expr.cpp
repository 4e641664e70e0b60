#include "charcauchy/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace charcauchy {

namespace {

// ---------------------------------------------------------------------------
// Truncated power series in one variable (the transverse coordinate u).
// c[k] is the coefficient of u^k.
// ---------------------------------------------------------------------------
struct Series {
  std::vector<double> c;
  explicit Series(int order) : c(order + 1, 0.0) {}
  int order() const { return static_cast<int>(c.size()) - 1; }
};

Series s_const(double x, int order) {
  Series s(order);
  s.c[0] = x;
  return s;
}

Series s_add(const Series& a, const Series& b) {
  Series r(a.order());
  for (int k = 0; k <= a.order(); ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

Series s_sub(const Series& a, const Series& b) {
  Series r(a.order());
  for (int k = 0; k <= a.order(); ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}

Series s_neg(const Series& a) {
  Series r(a.order());
  for (int k = 0; k <= a.order(); ++k) r.c[k] = -a.c[k];
  return r;
}

Series s_mul(const Series& a, const Series& b) {
  Series r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

Series s_div(const Series& a, const Series& b) {
  Series r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    double s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}

Series s_exp(const Series& f) {
  Series e(f.order());
  e.c[0] = std::exp(f.c[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * f.c[j] * e.c[k - j];
    e.c[k] = s / k;
  }
  return e;
}

void s_sincos(const Series& f, Series& sn, Series& cs) {
  sn = Series(f.order());
  cs = Series(f.order());
  sn.c[0] = std::sin(f.c[0]);
  cs.c[0] = std::cos(f.c[0]);
  for (int k = 1; k <= f.order(); ++k) {
    double a = 0.0, b = 0.0;
    for (int j = 1; j <= k; ++j) {
      a += j * f.c[j] * cs.c[k - j];
      b += j * f.c[j] * sn.c[k - j];
    }
    sn.c[k] = a / k;
    cs.c[k] = -b / k;
  }
}

Series s_powi(const Series& a, int e) {
  if (e < 0) return s_div(s_const(1.0, a.order()), s_powi(a, -e));
  Series r = s_const(1.0, a.order());
  Series base = a;
  int n = e;
  while (n > 0) {
    if (n & 1) r = s_mul(r, base);
    base = s_mul(base, base);
    n >>= 1;
  }
  return r;
}

// bump along a series argument: zero series when the base point is at or
// outside the support edge (the bump is flat to all orders there).
Series s_bump(const Series& z) {
  const double z0 = z.c[0];
  if (std::fabs(z0) >= 1.0) return s_const(0.0, z.order());
  Series t = s_sub(s_const(1.0, z.order()), s_mul(z, z));  // 1 - z^2 > 0 at base
  Series arg = s_sub(s_const(1.0, z.order()),
                     s_div(s_const(1.0, z.order()), t));
  return s_exp(arg);
}

}  // namespace

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------
struct Expr::Node {
  enum class Kind { number, var_u, var_v, add, sub, mul, div, neg, pow, sin, cos, exp, bump };
  Kind kind;
  double value = 0.0;       // number
  int exponent = 0;         // pow
  double center = 0.0, width = 1.0;  // bump
  std::shared_ptr<const Node> a, b;

  double eval(double u, double v) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::var_u: return u;
      case Kind::var_v: return v;
      case Kind::add: return a->eval(u, v) + b->eval(u, v);
      case Kind::sub: return a->eval(u, v) - b->eval(u, v);
      case Kind::mul: return a->eval(u, v) * b->eval(u, v);
      case Kind::div: return a->eval(u, v) / b->eval(u, v);
      case Kind::neg: return -a->eval(u, v);
      case Kind::pow: {
        double base = a->eval(u, v);
        return exponent >= 0 ? std::pow(base, exponent)
                             : 1.0 / std::pow(base, -exponent);
      }
      case Kind::sin: return std::sin(a->eval(u, v));
      case Kind::cos: return std::cos(a->eval(u, v));
      case Kind::exp: return std::exp(a->eval(u, v));
      case Kind::bump: {
        const double z = (a->eval(u, v) - center) / width;
        if (std::fabs(z) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - z * z));
      }
    }
    return 0.0;
  }

  Series series(double v, int order) const {
    switch (kind) {
      case Kind::number: return s_const(value, order);
      case Kind::var_u: {
        Series s(order);
        if (order >= 1) s.c[1] = 1.0;
        return s;
      }
      case Kind::var_v: return s_const(v, order);
      case Kind::add: return s_add(a->series(v, order), b->series(v, order));
      case Kind::sub: return s_sub(a->series(v, order), b->series(v, order));
      case Kind::mul: return s_mul(a->series(v, order), b->series(v, order));
      case Kind::div: return s_div(a->series(v, order), b->series(v, order));
      case Kind::neg: return s_neg(a->series(v, order));
      case Kind::pow: return s_powi(a->series(v, order), exponent);
      case Kind::sin: {
        Series sn(order), cs(order);
        s_sincos(a->series(v, order), sn, cs);
        return sn;
      }
      case Kind::cos: {
        Series sn(order), cs(order);
        s_sincos(a->series(v, order), sn, cs);
        return cs;
      }
      case Kind::exp: return s_exp(a->series(v, order));
      case Kind::bump: {
        Series z = a->series(v, order);
        z = s_mul(s_sub(z, s_const(center, order)),
                  s_const(1.0 / width, order));
        return s_bump(z);
      }
    }
    return s_const(0.0, order);
  }

  bool depends(Kind var) const {
    if (kind == var) return true;
    if (a && a->depends(var)) return true;
    if (b && b->depends(var)) return true;
    return false;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("expression parse error at position " +
                                std::to_string(pos) + ": " + msg + " in \"" +
                                s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Kind::add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = make(Kind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_power();
    for (;;) {
      if (eat('*')) {
        lhs = make(Kind::mul, lhs, parse_power());
      } else if (eat('/')) {
        lhs = make(Kind::div, lhs, parse_power());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_power() {
    NodePtr base = parse_unary();
    if (eat('^')) {
      skip_ws();
      bool negative = eat('-');
      skip_ws();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected integer exponent after '^'");
      int e = std::atoi(s.substr(start, pos - start).c_str());
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::pow;
      n->a = base;
      n->exponent = negative ? -e : e;
      return n;
    }
    return base;
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Kind::neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_primary();
  }

  double parse_constant_arg() {
    NodePtr n = parse_expr();
    if (n->depends(Kind::var_u) || n->depends(Kind::var_v))
      fail("bump center/width must be constant");
    return n->eval(0.0, 0.0);
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double x = std::strtod(s.c_str() + pos, &end);
      if (end == s.c_str() + pos) fail("bad number");
      pos = end - s.c_str();
      auto n = std::make_shared<Expr::Node>();
      n->kind = Kind::number;
      n->value = x;
      return n;
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
      const std::string name = s.substr(start, pos - start);
      if (name == "u") return make(Kind::var_u);
      if (name == "v") return make(Kind::var_v);
      if (name == "sin" || name == "cos" || name == "exp") {
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make(name == "sin" ? Kind::sin : name == "cos" ? Kind::cos : Kind::exp,
                    arg);
      }
      if (name == "bump") {
        if (!eat('(')) fail("expected '(' after bump");
        NodePtr arg = parse_expr();
        if (!eat(',')) fail("bump needs (x, center, width)");
        const double center = parse_constant_arg();
        if (!eat(',')) fail("bump needs (x, center, width)");
        const double width = parse_constant_arg();
        if (!eat(')')) fail("expected ')'");
        if (!(width > 0.0)) fail("bump width must be positive");
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::bump;
        n->a = arg;
        n->center = center;
        n->width = width;
        return n;
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p{text};
  Expr e;
  e.root_ = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  e.text_ = text;
  return e;
}

double Expr::operator()(double u, double v) const { return root_->eval(u, v); }

std::vector<double> Expr::u_series(double v, int order) const {
  return root_->series(v, order).c;
}

bool Expr::depends_on_u() const { return root_->depends(Node::Kind::var_u); }
bool Expr::depends_on_v() const { return root_->depends(Node::Kind::var_v); }

}  // namespace charcauchy
