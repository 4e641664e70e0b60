#include <doctest.h>

#include <cmath>

#include "charcauchy/geometry.hpp"
#include "oracles.hpp"

using namespace charcauchy;

TEST_CASE("build_grid spacing arithmetic") {
  SlabSpacetime st;
  st.t_min = 0.0;
  st.t_max = 4.0;
  const SlabGrid g = build_grid(st, 0.1, 1.0, 1.0, 7.0);
  CHECK(g.nu == 21);
  CHECK(g.nv == 61);
  CHECK(g.u(g.i_zero) == 0.0);  // exact
  CHECK(g.v(0) == doctest::Approx(1.0));
  CHECK(g.v(g.nv - 1) == doctest::Approx(7.0));

  // refinement relation: halving h doubles the line counts
  const SlabGrid g2 = build_grid(st, 0.05, 1.0, 1.0, 7.0);
  CHECK(g2.nu == 41);
  CHECK(g2.nv == 121);
  CHECK(g2.u(g2.i_zero) == 0.0);
  CHECK(g2.v(2) == doctest::Approx(g.v(1)));
}

TEST_CASE("build_grid rejects bad ranges") {
  SlabSpacetime st;
  st.t_min = 0.0;
  st.t_max = 1.0;
  CHECK_THROWS_WITH_AS(build_grid(st, 0.1, 5.0, 1.0, 7.0),
                       doctest::Contains("range-outside-slab"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(build_grid(st, -0.1, 1.0, 0.0, 1.0),
                       doctest::Contains("nonpositive-h"),
                       std::invalid_argument);
}

TEST_CASE("classify on the worked points") {
  SlabSpacetime st;
  st.t_min = 0.0;
  st.t_max = 4.0;
  CHECK(classify(st, 0.5, 1.0, CausalRegion::Jplus));
  CHECK_FALSE(classify(st, 0.5, 1.0, CausalRegion::Jminus));
  // (2.0, -1.5): t = 0.25 inside the slab but no causal curve from N reaches it
  CHECK_FALSE(classify(st, 2.0, -1.5, CausalRegion::J));
  CHECK(classify(st, 2.0, -1.5, CausalRegion::Exterior));
  // points on N belong to J+, J- and J simultaneously
  CHECK(classify(st, 0.0, 3.0, CausalRegion::Jplus));
  CHECK(classify(st, 0.0, 3.0, CausalRegion::Jminus));
  CHECK(classify(st, 0.0, 3.0, CausalRegion::J));
  CHECK_THROWS_WITH_AS(classify(st, 6.0, 6.0, CausalRegion::J),
                       doctest::Contains("point-outside-slab"),
                       std::invalid_argument);
}

TEST_CASE("classify agrees with the brute-force causal scan") {
  SlabSpacetime st;
  st.t_min = 0.0;
  st.t_max = 4.0;
  oracles::CausalScan scan{0.05, st};
  for (double u = -3.5; u <= 3.5; u += 0.45) {
    for (double v = -3.5; v <= 7.5; v += 0.45) {
      if (!st.in_slab(u, v)) continue;
      const double t = 0.5 * (u + v);
      if (t < st.t_min + 0.05 || t > st.t_max - 0.05) continue;  // stay interior
      CHECK(classify(st, u, v, CausalRegion::J) == scan.in_J(u, v));
    }
  }
}

TEST_CASE("region algebra invariants") {
  SlabSpacetime st;
  st.t_min = 0.0;
  st.t_max = 4.0;
  for (double u = -2.9; u <= 2.9; u += 0.31) {
    for (double v = -2.9; v <= 7.9; v += 0.37) {
      if (!st.in_slab(u, v)) continue;
      const bool jp = classify(st, u, v, CausalRegion::Jplus);
      const bool jm = classify(st, u, v, CausalRegion::Jminus);
      const bool j = classify(st, u, v, CausalRegion::J);
      const bool ext = classify(st, u, v, CausalRegion::Exterior);
      CHECK(j == (jp || jm));
      CHECK(ext == !j);
      CHECK((jp && jm) == (u == 0.0 && v > 2 * st.t_min && v < 2 * st.t_max));
    }
  }
}

TEST_CASE("interior_product_density against the generic contraction") {
  const SlabGrid g = oracles::small_grid();
  std::vector<double> ones(g.nv, 1.0), twos(g.nv, 2.0), ev(g.nv);
  for (int j = 0; j < g.nv; ++j) ev[j] = std::exp(g.v(j));

  const DensityOnN w1 = interior_product_density(ones, g);
  const DensityOnN w2 = interior_product_density(twos, g);
  const DensityOnN we = interior_product_density(ev, g);
  for (int j = 0; j < g.nv; ++j) {
    CHECK(w1.weight[j] == doctest::Approx(0.5));
    CHECK(w2.weight[j] == doctest::Approx(0.25));
    CHECK(we.weight[j] == doctest::Approx(0.5 * std::exp(-g.v(j))));
    // defining property w(alpha n) = w(n)/alpha
    CHECK(w2.weight[j] == doctest::Approx(w1.weight[j] / 2.0));
  }

  // oracle route: the generic determinant machinery on the slab line gives
  // the alpha = 1 weight per unit s, and |ds| = |dv|/2
  const HypersurfaceParam line = slab_null_line(g.spacetime, 2.0, 6.0, 101);
  const DensityOnN w_s = adapted_weight(line);
  for (int k = 0; k < w_s.ns; ++k)
    CHECK(w_s.at(0, k) == doctest::Approx(2.0 * w1.weight[0]).epsilon(1e-9));

  std::vector<double> bad(g.nv, 1.0);
  bad[3] = 0.0;
  CHECK_THROWS_AS(interior_product_density(bad, g), std::invalid_argument);
}

TEST_CASE("flat null line has vanishing expansion density") {
  const SlabGrid g = oracles::small_grid();
  const HypersurfaceParam line = slab_null_line(g.spacetime, 1.5, 6.5, 201);
  auto unit = [](double, std::span<const double>) { return 1.0; };
  const DensityOnN d = expansion_density(line, unit);
  for (double x : d.weight) CHECK(std::fabs(x) <= 1e-10);
}

TEST_CASE("light-cone expansion density is 2/r times the area density") {
  const std::vector<std::vector<double>> dirs = {{1.0, 0.5}, {2.2, 3.0}};
  const HypersurfaceParam cone = minkowski_light_cone(1.0, 5.0, 401, dirs);
  auto unit = [](double, std::span<const double>) { return 1.0; };
  const DensityOnN area = adapted_weight(cone);
  const DensityOnN d = expansion_density(cone, unit);
  for (int p = 0; p < d.ny; ++p) {
    const double sin_th = std::sin(dirs[p][0]);
    for (int k = 0; k < d.ns; ++k) {
      const double s = cone.s_samples[k];
      // oracle: area weight is s^2 sin(theta); its s-derivative is 2 s sin(theta)
      CHECK(area.at(p, k) == doctest::Approx(s * s * sin_th).epsilon(1e-8));
      CHECK(d.at(p, k) / area.at(p, k) == doctest::Approx(2.0 / s).epsilon(1e-6));
    }
  }
}

TEST_CASE("expansion density is invariant under conormal rescaling") {
  const std::vector<std::vector<double>> dirs = {{1.3, 0.25}};
  const HypersurfaceParam cone = minkowski_light_cone(1.0, 4.0, 301, dirs);
  auto unit = [](double, std::span<const double>) { return 1.0; };
  const DensityOnN base = expansion_density(cone, unit);
  double scale = 0.0;
  for (double x : base.weight) scale = std::max(scale, std::fabs(x));

  auto three = [](double, std::span<const double>) { return 3.0; };
  auto grow = [](double s, std::span<const double>) { return std::exp(0.3 * s); };
  auto flip = [](double, std::span<const double>) { return -2.0; };
  const DensityOnN d3 = expansion_density(cone, three);
  const DensityOnN dg = expansion_density(cone, grow);
  const DensityOnN df = expansion_density(cone, flip);
  for (std::size_t k = 0; k < base.weight.size(); ++k) {
    CHECK(std::fabs(d3.weight[k] - base.weight[k]) <= 1e-7 * scale);
    CHECK(std::fabs(dg.weight[k] - base.weight[k]) <= 1e-7 * scale);
    CHECK(std::fabs(df.weight[k] + base.weight[k]) <= 1e-7 * scale);
  }

  auto vanishing = [](double s, std::span<const double>) { return s - 2.0; };
  CHECK_THROWS_WITH_AS(expansion_density(cone, vanishing),
                       doctest::Contains("nonpositive-alpha"),
                       std::invalid_argument);
}

TEST_CASE("conformal scaling law") {
  // d = 1: exponent 0, both densities vanish
  const SlabGrid g = oracles::small_grid();
  const HypersurfaceParam line = slab_null_line(g.spacetime, 1.5, 6.5, 201);
  auto lam2 = [](double, std::span<const double>) { return 2.5; };
  const ConformalScalingReport flat = conformal_scaling_check(line, lam2);
  CHECK(flat.exponent == doctest::Approx(0.0));
  CHECK(flat.max_rel_error <= 1e-10);

  // d = 3 light cone with lambda = 4: density scales by 4
  const std::vector<std::vector<double>> dirs = {{1.0, 0.5}, {2.0, 4.0}};
  const HypersurfaceParam cone = minkowski_light_cone(1.0, 5.0, 401, dirs);
  auto lam4 = [](double, std::span<const double>) { return 4.0; };
  const ConformalScalingReport rep = conformal_scaling_check(cone, lam4);
  CHECK(rep.exponent == doctest::Approx(1.0));
  CHECK(rep.max_rel_error <= 1e-6);

  auto varying = [](double s, std::span<const double>) { return 1.0 + s; };
  CHECK_THROWS_WITH_AS(conformal_scaling_check(cone, varying),
                       doctest::Contains("lambda-varies-along-generators"),
                       std::invalid_argument);
}

TEST_CASE("conformal scaling error shrinks with the geometric step") {
  // refinement of the geometric finite-difference step on a cone with a
  // nontrivial lambda
  const std::vector<std::vector<double>> dirs = {{1.1, 0.7}};
  auto lam = [](double, std::span<const double> y) {
    return 1.0 + 0.5 * std::sin(y[0]);
  };
  double prev = 0.0;
  int level = 0;
  for (double step : {4e-3, 2e-3}) {
    HypersurfaceParam cone = minkowski_light_cone(1.0, 3.0, 201, dirs);
    cone.fd_step = step;
    const double err = conformal_scaling_check(cone, lam).max_rel_error;
    if (level++ > 0 && prev > 1e-12) CHECK(err <= prev * 1.05);
    prev = err;
  }
}

TEST_CASE("adaptedness check rejects a non-null chart") {
  HypersurfaceParam bad;
  bad.dim = 2;
  bad.chart = [](double s, std::span<const double>) {
    return std::vector<double>{s, 2.0 * s};  // not the null direction for this g
  };
  bad.metric = [](std::span<const double>) {
    return std::vector<double>{1.0, 0.0, 0.0, -1.0};  // (t, x) metric
  };
  bad.s_samples = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  bad.y_points = {{}};
  auto unit = [](double, std::span<const double>) { return 1.0; };
  CHECK_THROWS_WITH_AS(expansion_density(bad, unit),
                       doctest::Contains("adaptedness"), std::runtime_error);
}

TEST_CASE("slab_line_expansion_term vanishes also on conformal slabs") {
  SlabSpacetime st;
  st.t_min = -1.0;
  st.t_max = 5.0;
  st.metric = MetricKind::conformal;
  st.omega = [](double u, double v) {
    return 1.0 + 0.3 * std::sin(v) * std::cos(u);
  };
  const SlabGrid g = build_grid(st, 0.1, 1.0, 1.0, 7.0);
  for (double x : slab_line_expansion_term(g)) CHECK(std::fabs(x) <= 1e-11);
}
