#include "triplewell/potential.hpp"
#include "triplewell/precision.hpp"
#include "triplewell/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace triplewell;

EigenSolveConfig make_config(long basisSize, const TripleWellParams& params,
                             const PrecisionContext& ctx) {
    EigenSolveConfig cfg;
    cfg.basisSize = basisSize;
    cfg.basisFrequency = params.omega;
    cfg.ctx = ctx;
    return cfg;
}

void BM_BuildHamiltonian(benchmark::State& state) {
    auto ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    TripleWellParams params{Real(30)};
    auto cfg = make_config(state.range(0), params, ctx);
    for (auto _ : state) {
        auto block = build_hamiltonian(params, cfg, Parity::even);
        benchmark::DoNotOptimize(block.entries.data());
    }
}
// Matrix assembly is exact and banded (|i - j| <= 3 per parity block), so this
// should stay far below the eigensolve in every column.
BENCHMARK(BM_BuildHamiltonian)->Arg(60)->Arg(150);

void BM_JacobiLowest(benchmark::State& state) {
    auto ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    TripleWellParams params{Real(30)};
    auto cfg = make_config(state.range(0), params, ctx);
    auto block = build_hamiltonian(params, cfg, Parity::even);
    for (auto _ : state) {
        auto lowest = solve_lowest(block, 2, cfg);
        benchmark::DoNotOptimize(lowest.data());
    }
}
// Cyclic Jacobi is O(N^3) per sweep; the Arg ladder makes the growth visible.
BENCHMARK(BM_JacobiLowest)->Arg(32)->Arg(48)->Arg(72)->Unit(benchmark::kMillisecond);

void BM_ConvergedSpectrum(benchmark::State& state) {
    auto ctx = PrecisionContext::with_digits(40);
    auto scope = ctx.scope();
    TripleWellParams params{Real(static_cast<int>(state.range(0)))};
    for (auto _ : state) {
        auto [triplet, detail] = converged_spectrum(params, 18, ctx);
        benchmark::DoNotOptimize(triplet.e0);
        benchmark::DoNotOptimize(detail.stableDigits);
    }
}
// End-to-end cost of one table row: basis and precision escalation included.
BENCHMARK(BM_ConvergedSpectrum)->Arg(30)->Unit(benchmark::kSecond);

}  // namespace
