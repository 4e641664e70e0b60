// Kernel benchmark: OpenMP wavefront/stencil kernels against the serial
// reference implementations on a production-size grid.

#include <benchmark/benchmark.h>

#include <cmath>

#include "charcauchy/green.hpp"
#include "charcauchy/numerics.hpp"

using namespace charcauchy;

namespace {

SlabGrid bench_grid() {
  SlabSpacetime st;
  st.t_min = -6.0;
  st.t_max = 6.0;
  return build_grid(st, 0.02, 4.0, -3.0, 5.0);  // 401 x 401
}

WaveOperator bench_op() {
  WaveOperator op;
  op.A = Coefficient::from_expr(Expr::parse("0.3*sin(v)"), 6);
  op.B = Coefficient::from_expr(Expr::parse("0.2*cos(u)"), 6);
  op.q = Coefficient::from_expr(Expr::parse("1 + v/10"), 6);
  return op;
}

GridField bench_source(const SlabGrid& g) {
  return sample(g, [](double u, double v) {
    return unit_bump(u / 2.4) * unit_bump((v - 1.0) / 2.4);
  });
}

void BM_stencil_parallel(benchmark::State& state) {
  const SlabGrid g = bench_grid();
  const WaveOperator op = bench_op();
  const GridField phi = bench_source(g);
  for (auto _ : state) {
    const GridField out = apply_P(op, phi);
    benchmark::DoNotOptimize(out.a.data());
  }
}

void BM_stencil_serial(benchmark::State& state) {
  const SlabGrid g = bench_grid();
  const WaveOperator op = bench_op();
  const GridField phi = bench_source(g);
  for (auto _ : state) {
    const GridField out = serial::apply_P(op, phi);
    benchmark::DoNotOptimize(out.a.data());
  }
}

void BM_marching_wavefront(benchmark::State& state) {
  const SlabGrid g = bench_grid();
  const WaveOperator op = bench_op();
  const GridField src = bench_source(g);
  for (auto _ : state) {
    const GridField out = retarded_solve(op, src);
    benchmark::DoNotOptimize(out.a.data());
  }
}

void BM_marching_serial(benchmark::State& state) {
  const SlabGrid g = bench_grid();
  const WaveOperator op = bench_op();
  const GridField src = bench_source(g);
  for (auto _ : state) {
    const GridField out = serial::retarded_solve(op, src);
    benchmark::DoNotOptimize(out.a.data());
  }
}

void BM_pairing(benchmark::State& state) {
  const SlabGrid g = bench_grid();
  const GridField a = bench_source(g);
  const GridField b = sample(g, [](double u, double v) {
    return std::cos(0.3 * u - 0.2 * v);
  });
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_mu(a, b));
  }
}

}  // namespace

BENCHMARK(BM_stencil_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stencil_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_marching_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_marching_wavefront)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pairing)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
