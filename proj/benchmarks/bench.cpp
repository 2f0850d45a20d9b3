// Throughput benchmarks for the hot paths: single chain steps under both
// connectivity backends in both phases, component labelling, pairing
// generation, and the fixed-point solver.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "rcpotts/dynamics.hpp"
#include "rcpotts/graph.hpp"
#include "rcpotts/phase.hpp"
#include "rcpotts/rng.hpp"

using namespace rcpotts;

namespace {

Multigraph bench_graph(int n, int d) {
    RngStream rng(RngStream(12345).substream("bench_graph").id());
    return sample_configuration_model(n, d, rng);
}

void chain_steps(benchmark::State& state, double beta_ratio, InitState init,
                 ConnectivityMode mode) {
    const int n = static_cast<int>(state.range(0));
    const int q = 3, d = 3;
    const Multigraph g = bench_graph(n, d);
    RcChain chain(g, ChainParams::from_beta(q, beta_ratio * beta_c(q, d)), init);
    chain.set_connectivity_mode(mode);
    RngStream rng(RngStream(777).substream("bench_chain").id());
    // settle into the plateau so the steady-state mix of cut/non-cut edges is measured
    for (int s = 0; s < 20 * n; ++s) chain.step(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chain.step(rng));
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_step_disordered_bfs(benchmark::State& state) {
    chain_steps(state, 0.8, InitState::AllOut, ConnectivityMode::BfsOnDemand);
}
void bm_step_disordered_dsu(benchmark::State& state) {
    chain_steps(state, 0.8, InitState::AllOut, ConnectivityMode::LazyDsu);
}
void bm_step_ordered_bfs(benchmark::State& state) {
    chain_steps(state, 1.3, InitState::AllIn, ConnectivityMode::BfsOnDemand);
}
void bm_step_ordered_dsu(benchmark::State& state) {
    chain_steps(state, 1.3, InitState::AllIn, ConnectivityMode::LazyDsu);
}

void bm_components(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Multigraph g = bench_graph(n, 3);
    RngStream rng(RngStream(42).substream("bench_comp").id());
    std::vector<char> member(static_cast<std::size_t>(g.edge_count()));
    for (auto& c : member) c = rng.bernoulli(0.5) ? 1 : 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(components(g, member));
    }
    state.SetItemsProcessed(state.iterations() * g.edge_count());
}

void bm_configuration_model(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(RngStream(42).substream("bench_cm").id());
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_configuration_model(n, 3, rng));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bm_solve_t(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const double beta = beta_c(q, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_t(q, 4, beta));
    }
}

}  // namespace

BENCHMARK(bm_step_disordered_bfs)->Arg(1000)->Arg(10000);
BENCHMARK(bm_step_disordered_dsu)->Arg(1000)->Arg(10000);
BENCHMARK(bm_step_ordered_bfs)->Arg(1000)->Arg(10000);
BENCHMARK(bm_step_ordered_dsu)->Arg(1000)->Arg(10000);
BENCHMARK(bm_components)->Arg(1000)->Arg(10000);
BENCHMARK(bm_configuration_model)->Arg(1000)->Arg(10000);
BENCHMARK(bm_solve_t)->Arg(3)->Arg(20);

BENCHMARK_MAIN();
