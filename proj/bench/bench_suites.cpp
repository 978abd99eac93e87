#include <benchmark/benchmark.h>

#include <omp.h>

#include "bdlab/cantor.hpp"
#include "bdlab/fock.hpp"
#include "bdlab/limits.hpp"

using namespace bdlab;

namespace {

const CircleRotation kCircle;

Execution mode_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(omp_get_max_threads()));
}

void BM_GammaHom(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_gamma_homomorphism(kCircle, 2, 6, 1, 40, {}, mode_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 40);
  label(state);
}

void BM_RhoHom(benchmark::State& state) {
  const StageSequence seq({1, 2, 6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_rho_homomorphism(kCircle, seq, 3, 1, 10, {}, mode_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 10);
  label(state);
}

void BM_FockBlocks(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_weighted_blocks(kCircle, 3, 12, 1, 20, mode_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * 20);
  label(state);
}

}  // namespace

BENCHMARK(BM_GammaHom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhoHom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FockBlocks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
