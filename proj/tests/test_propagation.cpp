#include <doctest.h>

#include <cmath>

#include "charcauchy/propagation.hpp"
#include "oracles.hpp"

using namespace charcauchy;

namespace {

CharacteristicDatum bump_datum(const SlabGrid& g, double center, double width) {
  return CharacteristicDatum::from_function(
      g, [=](double v) { return unit_bump((v - center) / width); },
      center - width, center + width);
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::fabs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("zero data give zero jets of both types") {
  const SlabGrid g = oracles::small_grid();
  const CharacteristicDatum f = CharacteristicDatum::zero(g);
  for (JetType type : {JetType::future, JetType::past}) {
    const JetSequence seq =
        solve_propagation(WaveOperator::box(), f, Inhomogeneity::none(), type, 6, g);
    for (const auto& row : seq.psi)
      for (double x : row) CHECK(x == 0.0);
  }
}

TEST_CASE("pure wave: all higher jets vanish and the types agree") {
  const SlabGrid g = oracles::small_grid();
  const CharacteristicDatum f = bump_datum(g, 4.0, 1.0);
  const JetSequence fut = solve_propagation(WaveOperator::box(), f,
                                            Inhomogeneity::none(),
                                            JetType::future, 6, g);
  const JetSequence past = solve_propagation(WaveOperator::box(), f,
                                             Inhomogeneity::none(),
                                             JetType::past, 6, g);
  CHECK(fut.psi[0] == f.f);
  for (int r = 1; r <= 6; ++r) {
    for (double x : fut.psi[r]) CHECK(std::fabs(x) <= 1e-14);
    for (double x : past.psi[r]) CHECK(std::fabs(x) <= 1e-14);
  }
  const auto delta = jump_table(fut, past);
  CHECK(delta[0] == 0.0);
  for (int r = 1; r <= 6; ++r) CHECK(delta[r] <= 1e-14);
}

TEST_CASE("Klein-Gordon first jet against the quadrature oracle") {
  const SlabGrid g = oracles::small_grid(0.05);
  const double q = 1.7;
  const WaveOperator op = WaveOperator::klein_gordon(q);
  const double c = 4.0, w = 1.0;
  const CharacteristicDatum f = bump_datum(g, c, w);
  auto fn = [=](double v) { return unit_bump((v - c) / w); };

  const JetSequence fut =
      solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 3, g);
  const JetSequence past =
      solve_propagation(op, f, Inhomogeneity::none(), JetType::past, 3, g);

  // oracle: psi1_future(v) = -(q/4) \int_{-inf}^v f, psi1_past = +(q/4) \int_v^inf f
  const auto cumulative = oracles::cumulative_integral(fn, g);
  const double total = cumulative.back();
  double err_f = 0.0, err_p = 0.0;
  for (int j = 0; j < g.nv; ++j) {
    err_f = std::max(err_f, std::fabs(fut.psi[1][j] + 0.25 * q * cumulative[j]));
    err_p = std::max(err_p,
                     std::fabs(past.psi[1][j] - 0.25 * q * (total - cumulative[j])));
  }
  const double h4 = std::pow(g.h, 4);
  CHECK(err_f <= 20.0 * h4);
  CHECK(err_p <= 20.0 * h4);

  // jump: Delta_1 = (|q|/4) |∫ f| to O(h^4), constant in v
  const auto delta = jump_table(fut, past);
  CHECK(delta[0] == 0.0);
  CHECK(delta[1] == doctest::Approx(0.25 * q * total).epsilon(1e-4));
}

TEST_CASE("odd datum kills the first jump but not the second") {
  const SlabGrid g = oracles::small_grid(0.05);
  const double q = 2.0;
  const WaveOperator op = WaveOperator::klein_gordon(q);
  // f odd about v = 4: ∫ f = 0
  auto fn = [](double v) {
    return (v - 4.0) * unit_bump((v - 4.0) / 1.0);
  };
  const CharacteristicDatum f =
      CharacteristicDatum::from_function(g, fn, 3.0, 5.0);
  const JetSequence fut =
      solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 3, g);
  const JetSequence past =
      solve_propagation(op, f, Inhomogeneity::none(), JetType::past, 3, g);
  const auto delta = jump_table(fut, past);
  const double h4 = std::pow(g.h, 4);
  CHECK(delta[1] <= 20.0 * h4);

  // second-jump oracle: Delta_2 = (q/4)^2 ∫ W with W(v) = ∫_{-inf}^v f
  const auto W = oracles::cumulative_integral(fn, g);
  double intW = 0.0;
  for (int j = 1; j < g.nv; ++j) intW += 0.5 * (W[j - 1] + W[j]) * g.h;
  const double expected = 0.0625 * q * q * std::fabs(intW);
  CHECK(expected > 0.0);
  CHECK(delta[2] == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("inhomogeneity feeds the order-0 propagation equation") {
  const SlabGrid g = oracles::small_grid(0.05);
  // F supported strictly inside J+ so its jets on N vanish; with f = 0 the
  // first jet of future type solves 4 psi' = F|_N = 0 -> psi1 = 0
  WaveOperator op = WaveOperator::box();
  const Expr Fe = Expr::parse("bump(u,0.5,0.3)*bump(v,4,0.8)");
  const Inhomogeneity F =
      Inhomogeneity::from_coefficient(Coefficient::from_expr(Fe, 8), 3.2, 4.8);
  const CharacteristicDatum f = CharacteristicDatum::zero(g);
  const JetSequence fut =
      solve_propagation(op, f, F, JetType::future, 4, g);
  for (double x : fut.psi[1]) CHECK(std::fabs(x) <= 1e-13);

  // F touching N: 4 psi1' = F(0, v) -> psi1 = (1/4) cumulative integral
  const Expr Fe2 = Expr::parse("bump(u,0,0.5)*bump(v,4,0.8)");
  const Inhomogeneity F2 =
      Inhomogeneity::from_coefficient(Coefficient::from_expr(Fe2, 8), 3.2, 4.8);
  const JetSequence fut2 =
      solve_propagation(op, f, F2, JetType::future, 2, g);
  const auto cumulative = oracles::cumulative_integral(
      [&Fe2](double v) { return Fe2(0.0, v); }, g);
  double err = 0.0;
  for (int j = 0; j < g.nv; ++j)
    err = std::max(err, std::fabs(fut2.psi[1][j] - 0.25 * cumulative[j]));
  CHECK(err <= 20.0 * std::pow(g.h, 4));
}

TEST_CASE("assemble_tower structure") {
  const SlabGrid g = oracles::small_grid();
  SUBCASE("order 0 with a constant potential") {
    const WaveOperator op = WaveOperator::klein_gordon(3.0);
    const TowerOde ode = assemble_tower(op, Inhomogeneity::none(), 0, g);
    for (double k : ode.kappa) CHECK(k == 0.0);
    std::vector<std::vector<double>> psi{std::vector<double>(g.nv, 2.0)};
    std::vector<std::vector<double>> dpsi{std::vector<double>(g.nv, 0.0)};
    const auto rhs = ode.rhs(psi, dpsi);
    for (double r : rhs) CHECK(r == doctest::Approx(-6.0));  // -q*psi0
  }
  SUBCASE("kappa is the A-trace at every order") {
    WaveOperator op = WaveOperator::box();
    op.A = Coefficient::from_expr(Expr::parse("v + u"), 8);
    const TowerOde ode = assemble_tower(op, Inhomogeneity::none(), 2, g);
    for (int j = 0; j < g.nv; ++j)
      CHECK(ode.kappa[j] == doctest::Approx(g.v(j)));
  }
  SUBCASE("A = u contributes -C(2,1) psi_2 at order 2") {
    WaveOperator op = WaveOperator::box();
    op.A = Coefficient::from_expr(Expr::parse("u"), 8);
    const TowerOde ode = assemble_tower(op, Inhomogeneity::none(), 2, g);
    // rhs = -[C(2,1) (d_u A) psi_2] with all other terms zero
    std::vector<std::vector<double>> psi(3, std::vector<double>(g.nv, 0.0));
    std::vector<std::vector<double>> dpsi(3, std::vector<double>(g.nv, 0.0));
    psi[2].assign(g.nv, 1.5);
    const auto rhs = ode.rhs(psi, dpsi);
    for (double r : rhs) CHECK(r == doctest::Approx(-2.0 * 1.5));
  }
}

TEST_CASE("tower is linear in the data") {
  const SlabGrid g = oracles::small_grid();
  WaveOperator op;
  op.A = Coefficient::from_expr(Expr::parse("0.2*v"), 8);
  op.B = Coefficient::from_expr(Expr::parse("0.1"), 8);
  op.q = Coefficient::from_expr(Expr::parse("1+sin(v)/3"), 8);
  const CharacteristicDatum f1 = bump_datum(g, 3.6, 0.7);
  const CharacteristicDatum f2 = bump_datum(g, 4.4, 0.9);
  CharacteristicDatum combo = f1;
  combo.v_a = std::min(f1.v_a, f2.v_a);
  combo.v_b = std::max(f1.v_b, f2.v_b);
  for (int j = 0; j < g.nv; ++j) combo.f[j] = 2.0 * f1.f[j] - 0.5 * f2.f[j];

  const auto s1 = solve_propagation(op, f1, Inhomogeneity::none(), JetType::future, 5, g);
  const auto s2 = solve_propagation(op, f2, Inhomogeneity::none(), JetType::future, 5, g);
  const auto sc = solve_propagation(op, combo, Inhomogeneity::none(), JetType::future, 5, g);
  for (int r = 0; r <= 5; ++r) {
    std::vector<double> lin(g.nv);
    for (int j = 0; j < g.nv; ++j)
      lin[j] = 2.0 * s1.psi[r][j] - 0.5 * s2.psi[r][j];
    double scale = 1.0;
    for (double x : lin) scale = std::max(scale, std::fabs(x));
    CHECK(sup_diff(lin, sc.psi[r]) <= 1e-12 * scale);
  }
}

TEST_CASE("support law for future and past types") {
  const SlabGrid g = oracles::small_grid(0.05);
  const WaveOperator op = WaveOperator::klein_gordon(1.0);
  const CharacteristicDatum f = bump_datum(g, 4.0, 0.8);
  const auto fut = solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 6, g);
  const auto past = solve_propagation(op, f, Inhomogeneity::none(), JetType::past, 6, g);
  for (int r = 1; r <= 6; ++r) {
    double tol = 1e-10;
    for (double x : fut.psi[r]) tol = std::max(tol, 1e-10 * std::fabs(x));
    for (int j = 0; j < g.nv; ++j) {
      if (g.v(j) < f.v_a - 1.5 * g.h) CHECK(std::fabs(fut.psi[r][j]) <= tol);
      if (g.v(j) > f.v_b + 1.5 * g.h) CHECK(std::fabs(past.psi[r][j]) <= tol);
    }
  }
}

TEST_CASE("cross-section placement does not affect the jets") {
  const SlabGrid g = oracles::small_grid(0.05);
  WaveOperator op;
  op.A = Coefficient::from_expr(Expr::parse("0.3*v"), 8);
  op.B = Coefficient::zero_coefficient();
  op.q = Coefficient::from_expr(Expr::parse("2"), 8);
  const CharacteristicDatum f = bump_datum(g, 4.2, 0.7);
  const auto a = solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 5, g, 5);
  const auto b = solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 5, g, 12);
  for (int r = 0; r <= 5; ++r) {
    double scale = 1.0;
    for (double x : a.psi[r]) scale = std::max(scale, std::fabs(x));
    CHECK(sup_diff(a.psi[r], b.psi[r]) <= 1e-13 * scale);
  }
}

TEST_CASE("infeasible cross-section is rejected") {
  const SlabGrid g = oracles::small_grid();
  // support touching the lower grid edge leaves no room below
  const CharacteristicDatum f = bump_datum(g, 1.4, 0.4);
  CHECK_THROWS_WITH_AS(
      solve_propagation(WaveOperator::box(), f, Inhomogeneity::none(),
                        JetType::future, 3, g),
      doctest::Contains("infeasible-cross-section"), std::invalid_argument);
}

TEST_CASE("RK4 convergence at fourth order") {
  const double q = 1.3;
  const WaveOperator op = WaveOperator::klein_gordon(q);
  auto err_at = [&](double h) {
    const SlabGrid g = oracles::small_grid(h);
    const CharacteristicDatum f = bump_datum(g, 4.0, 1.0);
    const auto fut =
        solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 1, g);
    const auto cumulative = oracles::cumulative_integral(
        [](double v) { return unit_bump((v - 4.0) / 1.0); }, g, 64);
    double e = 0.0;
    for (int j = 0; j < g.nv; ++j)
      e = std::max(e, std::fabs(fut.psi[1][j] + 0.25 * q * cumulative[j]));
    return e;
  };
  const double e1 = err_at(0.1);
  const double e2 = err_at(0.05);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 24.0);
}

TEST_CASE("jet order limits are enforced") {
  const SlabGrid g = oracles::small_grid();
  WaveOperator op = WaveOperator::box();
  op.A = Coefficient::from_expr(Expr::parse("u*v"), 3);
  const CharacteristicDatum f = bump_datum(g, 4.0, 0.8);
  CHECK_THROWS_WITH_AS(
      solve_propagation(op, f, Inhomogeneity::none(), JetType::future, 6, g),
      doctest::Contains("jet order"), std::invalid_argument);
}
