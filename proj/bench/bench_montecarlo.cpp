// Serial reference vs OpenMP Monte Carlo kernels on a parity-style cell.
#include <benchmark/benchmark.h>

#include "csifuzz/montecarlo.hpp"

using namespace csifuzz;

namespace {

LinkScenario parity_cell() {
    LinkScenario s;
    s.phy = {Modulation::QPSK, Coding::Conv12};
    s.channel.cir = {Complex{1.0, 0.0}, Complex{0.4, 0.0}};
    s.channel.noise_variance = noise_variance_for_snr_db(4.0);
    s.taps = FuzzerTaps{{0.0, 0.35}, 0.1};
    return s;
}

void BM_LinkSerial(benchmark::State& state) {
    const LinkScenario s = parity_cell();
    const auto frames = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_link_serial(s, 1, frames));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LinkParallel(benchmark::State& state) {
    const LinkScenario s = parity_cell();
    const auto frames = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_link_parallel(s, 1, frames));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = max_threads();
}

void BM_PairedSerial(benchmark::State& state) {
    const LinkScenario a = parity_cell();
    LinkScenario b = a;
    b.taps = FuzzerTaps::identity();
    const auto frames = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_paired_serial(a, b, 1, frames));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairedParallel(benchmark::State& state) {
    const LinkScenario a = parity_cell();
    LinkScenario b = a;
    b.taps = FuzzerTaps::identity();
    const auto frames = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_paired_parallel(a, b, 1, frames));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = max_threads();
}

}  // namespace

BENCHMARK(BM_LinkSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinkParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairedSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairedParallel)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
