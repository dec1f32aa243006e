#include "triplewell/potential.hpp"
#include "triplewell/precision.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace triplewell;

void BM_AdaptiveExponential(benchmark::State& state) {
    auto ctx = PrecisionContext::with_digits(static_cast<unsigned>(state.range(0)));
    auto scope = ctx.scope();
    Real delta(15);
    auto f = [&](const Real& t) { return exp(delta * t); };
    for (auto _ : state) {
        Real r = integrate_adaptive(f, Real(-1) / 2, Real(1) / 2, ctx);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_AdaptiveExponential)->Arg(30)->Arg(60)->Arg(100);

void BM_ActionQuadrature(benchmark::State& state) {
    auto ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    TripleWellParams params{Real(static_cast<int>(state.range(0)))};
    for (auto _ : state) {
        Real r = classical_action(params, ActionMethod::quadrature, ctx);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ActionQuadrature)->Arg(30)->Arg(110);

}  // namespace
