#include <benchmark/benchmark.h>

#include "dbarcone/dbarcone.hpp"

using namespace dbarcone;

namespace {

void BM_PolynomialEvaluate(benchmark::State& state) {
  const auto poly = fixture_variety("cone6").polynomials()[0];
  CVector z(2);
  z << Complex(0.3, 0.1), Complex(-0.2, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(poly.evaluate(z));
}
BENCHMARK(BM_PolynomialEvaluate);

void BM_CauchyTransformDisk(benchmark::State& state) {
  auto disk = [](Complex u) { return std::norm(u) < 1.0 ? Complex(1.0) : Complex(0.0); };
  for (auto _ : state) benchmark::DoNotOptimize(cauchy_transform(disk, 1.0, Complex(0.3, 0.4), {}));
}
BENCHMARK(BM_CauchyTransformDisk)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state, const char* fixture) {
  const auto v = fixture_variety(fixture);
  const auto form = bump_dbar_form(default_bump(v.ambient_dim()));
  const CVector p = sample_link(v, 1, 1).points[0];
  const CVector z = act(orbit_scale_to_norm(v.weights(), p, 0.6), v.weights(), p);
  for (auto _ : state) benchmark::DoNotOptimize(solve(v, form, z, {}));
}
BENCHMARK_CAPTURE(BM_Solve, line2, "line2")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, quadric, "quadric-cone")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, cusp, "cusp")->Unit(benchmark::kMillisecond);

void BM_ChartEval(benchmark::State& state) {
  const auto q = fixture_variety("quadric-cone");
  CVector xi(3);
  xi << 1.0, 1.0, 1.0;
  const auto chart = build_chart(q, xi);
  const CVector x = chart.x_anchor() + CVector::Constant(1, Complex(0.1, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(chart_eval(chart, Complex(0.5, 0.2), x));
}
BENCHMARK(BM_ChartEval);

void BM_SurfaceIntegral(benchmark::State& state) {
  const auto q = fixture_variety("quadric-cone");
  SamplingOptions o;
  o.n_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(surface_integral(q, [](const CVector& z) { return z.squaredNorm(); }, 1.0, o));
}
BENCHMARK(BM_SurfaceIntegral)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
