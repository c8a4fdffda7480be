#include <benchmark/benchmark.h>

#include <vector>

#include "hq/catalog.hpp"
#include "hq/expr.hpp"
#include "hq/integrator.hpp"
#include "hq/quadrature.hpp"
#include "hq/rectangle.hpp"
#include "hq/reference.hpp"

namespace {

const auto kUnit = hq::shared_rectangle("unit");

void BM_WallisVolume(benchmark::State& state) {
  for (auto _ : state) {
    auto r = hq::parse_rectangle("tail: 4*i^2/(4*i^2 - 1)");
    benchmark::DoNotOptimize(r.classification().value);
  }
}
BENCHMARK(BM_WallisVolume)->Unit(benchmark::kMillisecond);

void BM_ProductFormFirstExample(benchmark::State& state) {
  const auto form = hq::product_form(hq::PowerSeries::geometric(2.0), "x[n]^(1/n^2)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(hq::integrate_product_form(form, *kUnit).value);
  }
}
BENCHMARK(BM_ProductFormFirstExample)->Unit(benchmark::kMillisecond);

void BM_CschSeries(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hq::reference::csch_series(1e-12).value);
}
BENCHMARK(BM_CschSeries);

void BM_MonteCarloLevel(benchmark::State& state) {
  hq::ConvergenceConfig cfg;
  cfg.mc_samples = static_cast<std::size_t>(state.range(0));
  const auto f = hq::sec9_ex1(kUnit);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hq::integrate_level(f, *kUnit, 12, hq::Engine::MonteCarlo, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloLevel)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)
    ->Unit(benchmark::kMillisecond);

void BM_TensorQuad(benchmark::State& state) {
  const std::vector<double> sides(static_cast<std::size_t>(state.range(0)), 1.0);
  const auto f = hq::sec9_ex2(kUnit);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hq::quadrature::tensor_product(
        [&](std::span<const double> x) { return f(x); }, sides, 8));
  }
}
BENCHMARK(BM_TensorQuad)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_ExpressionEval(benchmark::State& state) {
  const auto e = hq::expr::parse("1/(2 - prod(n,1,inf, x[n]^(1/n^2)))");
  const std::vector<double> x(static_cast<std::size_t>(state.range(0)), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(hq::expr::eval_truncated(*e, x));
}
BENCHMARK(BM_ExpressionEval)->Range(8, 1024);

}  // namespace

BENCHMARK_MAIN();
