// Serial reference vs OpenMP path of the batch kernels.
//   nlosc_bench --benchmark_filter=Implicit
#include <benchmark/benchmark.h>

#include "nlosc/closed_form.hpp"
#include "nlosc/harness.hpp"
#include "nlosc/implicit.hpp"
#include "nlosc/io.hpp"
#include "nlosc/kernels.hpp"

using namespace nlosc;
using kernels::Exec;

namespace {

const ModelParams kG1{OscillatorKind::Generalized1, 1.0, 0.45, -1.0};
const ModelParams kG2{OscillatorKind::Generalized2, 1.0, 1.0, -1.0};

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& state) {
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.SetLabel(state.range(1) ? "omp" : "serial");
}

void BM_ClosedFormSamples(benchmark::State& state) {
    const double E = C_to_energy(kG1, 1.0);
    const ClosedFormSolution sol = from_energy(kG1, E, BranchSide::Either, harness::default_start(kG1, E), 0.0);
    const std::vector<double> ts = io::linspace(0.0, 100.0, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::sample_closed_form(kG1, sol, ts, exec_of(state)));
    }
    label(state);
}

void BM_ImplicitSamples(benchmark::State& state) {
    const ImplicitSolution sol = ImplicitSolution::build(kG2, 1.0, harness::default_start(kG2, 1.0));
    const std::vector<double> ts = io::linspace(0.0, 100.0, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::sample_implicit(sol, ts, exec_of(state)));
    }
    label(state);
}

void BM_PotentialGrid(benchmark::State& state) {
    const std::vector<double> xs = io::linspace(-0.999, 0.999, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::potential_grid(kG2, xs, exec_of(state)));
    }
    label(state);
}

void BM_ClassifyBatch(benchmark::State& state) {
    const ModelParams p{OscillatorKind::Generalized1, 1.0, 1.0, 1.0};
    const std::vector<double> es = io::linspace(-0.3, 5.0, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::classify_batch(p, es, exec_of(state)));
    }
    label(state);
}

}  // namespace

BENCHMARK(BM_ClosedFormSamples)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}})->UseRealTime();
BENCHMARK(BM_ImplicitSamples)->ArgsProduct({{1 << 10, 1 << 13}, {0, 1}})->UseRealTime();
BENCHMARK(BM_PotentialGrid)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}})->UseRealTime();
BENCHMARK(BM_ClassifyBatch)->ArgsProduct({{1 << 10, 1 << 13}, {0, 1}})->UseRealTime();

BENCHMARK_MAIN();
