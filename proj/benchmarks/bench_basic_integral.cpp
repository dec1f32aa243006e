#include "triplewell/dilute_gas.hpp"
#include "triplewell/potential.hpp"
#include "triplewell/precision.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace triplewell;

// omega = 30, T = 0.3 is the regime the amplitude cross-checks run in.
struct IntegralFixture {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    TripleWellParams params{Real(30)};
    WellFrequencies wells = well_frequencies(params);
    InstantonPrefactors pre = instanton_prefactors(params);
    Real span = Real(3) / 10;
};

void BM_ClosedFormDiagonal(benchmark::State& state) {
    IntegralFixture fx;
    auto scope = fx.ctx.scope();
    long n = state.range(0);
    for (auto _ : state) {
        auto v = basic_integral(n, n, fx.span, fx.wells, fx.pre, IntegralMethod::closedForm,
                                fx.ctx);
        benchmark::DoNotOptimize(v.value);
    }
}
// The double binomial sum has (n+1)(m+1) terms; the ladder shows how much of
// that is hidden by the fixed prefactor work.
BENCHMARK(BM_ClosedFormDiagonal)->Arg(4)->Arg(12)->Arg(24);

void BM_RecursiveTriangle(benchmark::State& state) {
    IntegralFixture fx;
    auto scope = fx.ctx.scope();
    long depth = state.range(0);
    for (auto _ : state) {
        Real acc(0);
        for (long n = 0; n <= depth; ++n) {
            for (long m = 0; n + m <= depth; ++m) {
                acc += basic_integral(n, m, fx.span, fx.wells, fx.pre, IntegralMethod::recursive,
                                      fx.ctx)
                           .value;
            }
        }
        benchmark::DoNotOptimize(acc);
    }
}
// Every call rebuilds its ladder from I(0,0), so the full triangle is the
// worst-case access pattern of a truncated amplitude sum.
BENCHMARK(BM_RecursiveTriangle)->Arg(8)->Arg(24);

void BM_OrderedQuadratureOracle(benchmark::State& state) {
    IntegralFixture fx;
    auto scope = fx.ctx.scope();
    for (auto _ : state) {
        auto v = basic_integral(2, 2, fx.span, fx.wells, fx.pre, IntegralMethod::quadratureOracle,
                                fx.ctx);
        benchmark::DoNotOptimize(v.value);
    }
}
// Five nested time orderings carried by Chebyshev interpolants; this is why
// the oracle is capped at n + m <= 4.
BENCHMARK(BM_OrderedQuadratureOracle)->Unit(benchmark::kMillisecond);

void BM_TruncatedAmplitude(benchmark::State& state) {
    IntegralFixture fx;
    auto scope = fx.ctx.scope();
    int maxI = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto amp = amplitude_0_to_1(fx.span, fx.wells, fx.pre, AmplitudeMethod::truncatedSum,
                                    fx.ctx, maxI);
        benchmark::DoNotOptimize(amp.value);
    }
}
BENCHMARK(BM_TruncatedAmplitude)->Arg(8)->Arg(24);

void BM_ClosedFormAmplitude(benchmark::State& state) {
    IntegralFixture fx;
    auto scope = fx.ctx.scope();
    for (auto _ : state) {
        auto amp = amplitude_0_to_1(fx.span, fx.wells, fx.pre, AmplitudeMethod::closedForm,
                                    fx.ctx);
        benchmark::DoNotOptimize(amp.value);
    }
}
BENCHMARK(BM_ClosedFormAmplitude);

}  // namespace
