#include <benchmark/benchmark.h>

#include "kkldm/core_ldm.hpp"
#include "kkldm/exact_recursion.hpp"
#include "kkldm/fibonacci_model.hpp"
#include "kkldm/lambda_walk.hpp"
#include "kkldm/rate_equation.hpp"

namespace {

using namespace kkldm;

void BM_LdmSim(benchmark::State& state) {
  const SimConfig c{static_cast<std::size_t>(state.range(0)), 0, 200, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sample_mean_ldm(c).mean);
  state.SetItemsProcessed(state.iterations() * c.trials);
}

void BM_LdmSimReference(benchmark::State& state) {
  const SimConfig c{static_cast<std::size_t>(state.range(0)), 0, 200, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sample_mean_ldm_reference(c).mean);
  state.SetItemsProcessed(state.iterations() * c.trials);
}

void BM_PdmSim(benchmark::State& state) {
  const SimConfig c{static_cast<std::size_t>(state.range(0)), 0, 200, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sample_mean_pdm(c).mean);
}

void BM_PdmSimReference(benchmark::State& state) {
  const SimConfig c{static_cast<std::size_t>(state.range(0)), 0, 200, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sample_mean_pdm_reference(c).mean);
}

void BM_WalkEnsemble(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(walk_ensemble(static_cast<int>(state.range(0)), 500, 1).mean_lambda2);
}

void BM_WalkEnsembleReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(walk_ensemble_reference(static_cast<int>(state.range(0)), 500, 1).mean_lambda2);
  }
}

void BM_Enumerate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_pdf(static_cast<int>(state.range(0))).coeffs.size());
}

void BM_EnumerateReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_pdf_reference(static_cast<int>(state.range(0))).coeffs.size());
  }
}

void BM_RateSolve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve(static_cast<int>(state.range(0))));
}

void BM_RateSolveReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_reference(static_cast<int>(state.range(0))));
}

void BM_BoundarySweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(first_boundary_mismatch(static_cast<std::uint64_t>(state.range(0))));
}

void BM_BoundarySweepReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_boundary_mismatch_reference(static_cast<std::uint64_t>(state.range(0))));
  }
}

}  // namespace

BENCHMARK(BM_LdmSim)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LdmSimReference)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PdmSim)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PdmSimReference)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalkEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WalkEnsembleReference)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateReference)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateSolve)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateSolveReference)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundarySweep)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundarySweepReference)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
