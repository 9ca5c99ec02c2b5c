#include <benchmark/benchmark.h>

#include "physbc/barrier.hpp"
#include "physbc/filter.hpp"
#include "physbc/lipschitz.hpp"
#include "physbc/random.hpp"
#include "physbc/sampling.hpp"
#include "physbc/solver.hpp"
#include "physbc/special_functions.hpp"

using namespace physbc;

namespace {

Dataset surrogate(std::size_t count) {
  const auto p = supply_demand_preset();
  const auto truth = p.physics.with_perturbation({0.005 * 1.4142135623730951, p.perturbation_frequency, 0.0});
  const std::size_t counts[] = {count};
  return sample_grid(truth, p.domain, counts);
}

void BM_BetaIncInv(benchmark::State& state) {
  const double b = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beta_inc_inv(0.95, 6.0, b));
}
BENCHMARK(BM_BetaIncInv)->Arg(100)->Arg(10000)->Arg(130229)->Arg(1000000);

void BM_CoveringRadius1D(benchmark::State& state) {
  const auto data = surrogate(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(covering_radius(data.states(), data.domain()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoveringRadius1D)->Arg(10000)->Arg(220000);

void BM_CoveringRadius2D(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> s;
  for (int i = 0; i < state.range(0); ++i) {
    s.push_back(rng.uniform01());
    s.push_back(rng.uniform01());
  }
  const RegionBox box({0, 0}, {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(covering_radius(s, box, 512));
}
BENCHMARK(BM_CoveringRadius2D)->Arg(1000)->Arg(20000);

void BM_Filter(benchmark::State& state) {
  const auto data = surrogate(static_cast<std::size_t>(state.range(0)));
  const auto phys = supply_demand_preset().physics;
  for (auto _ : state) benchmark::DoNotOptimize(apply_filter(data, phys, FilterConfig{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filter)->Arg(220000);

void BM_SolveScenarioProgram(benchmark::State& state) {
  const auto p = supply_demand_preset();
  const auto data = surrogate(static_cast<std::size_t>(state.range(0)));
  const auto x0 = cover_states(p.initial, 1e5);
  const auto xu = cover_states(p.unsafe, 1e5);
  const auto sys = assemble(BarrierTemplate::full(1, 2), 0.83, data, x0, xu,
                            {p.domain, p.initial, p.unsafe});
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys.lp));
  state.counters["rows"] = static_cast<double>(sys.rows());
}
BENCHMARK(BM_SolveScenarioProgram)->Arg(10000)->Arg(220000)->Unit(benchmark::kMillisecond);

void BM_SolveRandomDense(benchmark::State& state) {
  Rng rng(3);
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  EpigraphLp lp(dim);
  std::vector<double> row(dim);
  for (int i = 0; i < 2000; ++i) {
    for (double& v : row) v = rng.uniform(-1, 1);
    lp.add_row(row, rng.uniform(-1, 1));
  }
  for (std::size_t j = 0; j < dim; ++j) lp.set_bounds(j, -10, 10);
  for (auto _ : state) benchmark::DoNotOptimize(solve(lp));
}
BENCHMARK(BM_SolveRandomDense)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Lipschitz(benchmark::State& state) {
  const auto data = surrogate(220000);
  const BarrierCertificate cert{BarrierTemplate::full(1, 2), {-100, 38, -100}, 0.83, -122, -121.9};
  LipschitzConfig cfg;
  cfg.method = static_cast<LipschitzMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lipschitz(cert, data, cfg));
}
BENCHMARK(BM_Lipschitz)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
