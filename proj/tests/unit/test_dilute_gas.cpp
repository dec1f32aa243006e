#include "triplewell/dilute_gas.hpp"

#include "doctest.h"

#include "checks.hpp"
#include "triplewell/potential.hpp"
#include "triplewell/simplex_quadrature.hpp"

#include <vector>

using namespace triplewell;
using twtest::check_close;
using twtest::check_small;
using twtest::ten_to;

namespace {

struct Model {
    WellFrequencies wells;
    InstantonPrefactors pre;
};

Model model_for(double omega) {
    TripleWellParams params{Real(omega)};
    return {well_frequencies(params), instanton_prefactors(params)};
}

// Frequencies and coupling chosen directly so that B/delta is an exact,
// convenient ratio; used by the sequence and weight tests.
Model synthetic_ratio(const Real& u) {
    WellFrequencies wells{Real(1), Real(2), Real("0.5")};
    InstantonPrefactors pre;
    pre.action = Real(1) / 4;
    pre.fluctuationFactor = exp(-pre.action);
    pre.couplingB = u * wells.delta;
    pre.matchingFactor = pre.couplingB / (sqrt(Real(2)) * pre.fluctuationFactor);
    pre.normalization = sqrt(wells.omega0 / (2 * pi_value()));
    return {wells, pre};
}

}  // namespace

TEST_CASE("closed form and recursion agree across the index rectangle") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    for (double omega : {1.0, 30.0}) {
        Model m = model_for(omega);
        for (auto [n, mm] : std::vector<std::pair<long, long>>{
                 {0, 0}, {1, 1}, {2, 0}, {0, 3}, {2, 2}, {5, 3}}) {
            for (const char* span : {"0.2", "1.0"}) {
                Real T(span);
                auto closed =
                    basic_integral(n, mm, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
                auto rec =
                    basic_integral(n, mm, T, m.wells, m.pre, IntegralMethod::recursive, ctx);
                check_close(rec.value, closed.value, ten_to(-42), "recursive vs closed");
            }
        }
    }
}

TEST_CASE("nested quadrature oracle confirms the analytic values") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    {
        Model m = model_for(1.0);
        Real T("0.2");
        auto closed = basic_integral(1, 1, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
        auto oracle =
            basic_integral(1, 1, T, m.wells, m.pre, IntegralMethod::quadratureOracle, ctx);
        check_close(oracle.value, closed.value, ten_to(-30), "oracle (1,1) omega=1");

        auto closed22 = basic_integral(2, 2, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
        auto oracle22 =
            basic_integral(2, 2, T, m.wells, m.pre, IntegralMethod::quadratureOracle, ctx);
        check_close(oracle22.value, closed22.value, ten_to(-28), "oracle (2,2) omega=1");
    }
    {
        Model m = model_for(30.0);
        Real T(1);
        auto closed = basic_integral(0, 3, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
        auto oracle =
            basic_integral(0, 3, T, m.wells, m.pre, IntegralMethod::quadratureOracle, ctx);
        check_close(oracle.value, closed.value, ten_to(-28), "oracle (0,3) omega=30");
    }
}

TEST_CASE("common factor can be stripped and restored") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Model m = model_for(30.0);
    Real T("0.7");
    auto full = basic_integral(0, 0, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
    REQUIRE(full.includesCommonFactor);

    auto stripped = with_common_factor(full, m.wells, false, ctx);
    CHECK_FALSE(stripped.includesCommonFactor);
    Real u = m.pre.couplingB / m.wells.delta;
    Real expected = u * (exp(m.wells.delta * T / 2) - exp(-m.wells.delta * T / 2));
    check_close(stripped.value, expected, ten_to(-50), "stripped seed value");

    auto restored = with_common_factor(stripped, m.wells, true, ctx);
    check_close(restored.value, full.value, ten_to(-55), "round trip");

    auto same = with_common_factor(full, m.wells, true, ctx);
    CHECK(same.value == full.value);
}

TEST_CASE("short time spans shrink linearly") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Model m = model_for(30.0);
    Real T = ten_to(-8);
    auto seed = basic_integral(0, 0, T, m.wells, m.pre, IntegralMethod::closedForm, ctx);
    Real leading = m.pre.couplingB * T *
                   exp(-(m.wells.omega0 + m.wells.omega1) * T / 4);
    check_close(seed.value, leading, ten_to(-7), "leading small-T behaviour");
    CHECK(seed.value > 0);
}

TEST_CASE("invalid integral requests are rejected") {
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    auto scope = ctx.scope();
    Model m = model_for(30.0);
    Real T(1);
    CHECK_THROWS_AS(basic_integral(-1, 0, T, m.wells, m.pre, IntegralMethod::closedForm, ctx),
                    std::invalid_argument);
    CHECK_THROWS_AS(basic_integral(0, 0, Real(0), m.wells, m.pre, IntegralMethod::closedForm, ctx),
                    std::invalid_argument);
    CHECK_THROWS_AS(basic_integral(3, 2, T, m.wells, m.pre, IntegralMethod::quadratureOracle, ctx),
                    MethodDisallowedError);
    CHECK_NOTHROW(basic_integral(3, 2, T, m.wells, m.pre, IntegralMethod::closedForm, ctx));
}

TEST_CASE("analytic methods stay consistent deep into the table") {
    // Deep entries are factorially small while the alternating sums that
    // produce them are not, so dozens of digits cancel; widening the working
    // precision keeps the comparison honest.
    {
        PrecisionContext wide = PrecisionContext::with_digits(120);
        auto scope = wide.scope();
        Model m = model_for(30.0);
        Real T("0.3");
        for (auto [n, mm] :
             std::vector<std::pair<long, long>>{{10, 7}, {24, 23}, {24, 24}}) {
            auto closed =
                basic_integral(n, mm, T, m.wells, m.pre, IntegralMethod::closedForm, wide);
            auto rec = basic_integral(n, mm, T, m.wells, m.pre, IntegralMethod::recursive, wide);
            check_close(rec.value, closed.value, ten_to(-40), "deep table, omega=30");
        }
    }
    {
        PrecisionContext wide = PrecisionContext::with_digits(100);
        auto scope = wide.scope();
        Model m = model_for(1.0);
        Real T("0.5");
        auto closed = basic_integral(12, 12, T, m.wells, m.pre, IntegralMethod::closedForm, wide);
        auto rec = basic_integral(12, 12, T, m.wells, m.pre, IntegralMethod::recursive, wide);
        check_close(rec.value, closed.value, ten_to(-35), "deep table, omega=1");
    }
}

TEST_CASE("transition terms equal the raw ordered-charge integrals") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Model m = model_for(1.0);
    Real T("0.4");
    Real d = m.wells.delta;
    Real B = m.pre.couplingB;
    Real N = m.pre.normalization;
    Real shared = exp(-(m.wells.omega0 + m.wells.omega1) * T / 4);

    // Odd terms: 2i+1 alternating charges starting and ending positive.
    for (long i : {0L, 1L, 2L}) {
        std::vector<Real> charges(2 * i + 1);
        for (size_t k = 0; k < charges.size(); ++k)
            charges[k] = (k % 2 == 0) ? d : Real(-d);
        Real nested = ordered_exponential_integral(charges, T, ctx);
        Real viaCharges =
            N / sqrt(Real(2)) * pow(B, static_cast<unsigned>(2 * i + 1)) * shared * nested;
        check_close(odd_term(i, T, m.wells, m.pre, ctx), viaCharges, ten_to(-26),
                    "odd ordered-charge identity");
    }

    // Even terms: 2i alternating charges starting negative, and the lower-well
    // exponential replaces the shared factor.
    for (long i : {1L, 2L}) {
        std::vector<Real> charges(2 * i);
        for (size_t k = 0; k < charges.size(); ++k)
            charges[k] = (k % 2 == 0) ? Real(-d) : d;
        Real nested = ordered_exponential_integral(charges, T, ctx);
        Real viaCharges = N / 2 * pow(B, static_cast<unsigned>(2 * i)) *
                          exp(-m.wells.omega1 * T / 2) * nested;
        check_close(even_term(i, T, m.wells, m.pre, ctx), viaCharges, ten_to(-26),
                    "even ordered-charge identity");
    }

    // Cross-method spot checks at higher order.
    check_close(odd_term(2, Real("0.5"), m.wells, m.pre, ctx),
                N / sqrt(Real(2)) *
                    basic_integral(2, 2, Real("0.5"), m.wells, m.pre, IntegralMethod::recursive,
                                   ctx)
                        .value,
                ten_to(-40), "odd term vs recursion");
    check_close(even_term(3, T, m.wells, m.pre, ctx),
                N / 2 *
                    basic_integral(2, 3, T, m.wells, m.pre, IntegralMethod::recursive, ctx).value,
                ten_to(-40), "even term vs recursion");

    CHECK_THROWS_AS(even_term(0, T, m.wells, m.pre, ctx), std::invalid_argument);
    CHECK_THROWS_AS(odd_term(-1, T, m.wells, m.pre, ctx), std::invalid_argument);
}

TEST_CASE("sequence seeds match their closed forms and partial sums") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Real u("0.1");
    Model m = synthetic_ratio(u);
    Real q = sqrt(1 + 4 * u * u);

    auto aPlus = coefficient_sequence(SequenceKind::aPlus, 4, m.wells, m.pre, ctx);
    auto aMinus = coefficient_sequence(SequenceKind::aMinus, 4, m.wells, m.pre, ctx);
    auto lambdaPlus = coefficient_sequence(SequenceKind::lambdaPlus, 4, m.wells, m.pre, ctx);
    auto lambdaMinus = coefficient_sequence(SequenceKind::lambdaMinus, 4, m.wells, m.pre, ctx);
    CHECK(aPlus.ratio == u);

    Real a0 = u / q;
    Real a1 = (1 - 1 / q) / 2;
    Real lambda1 = 4 * u * u * u / (q * (1 + q) * (1 + q));
    check_close(aPlus.values[0], a0, ten_to(-20), "a0+ closed form");
    check_close(aPlus.values[1], a1, ten_to(-20), "a1+ closed form");
    check_close(aMinus.values[0], -a0, ten_to(-20), "a0- closed form");
    check_close(aMinus.values[1], a1, ten_to(-20), "a1- closed form");
    check_close(lambdaPlus.values[0], a1, ten_to(-20), "lambda0+ closed form");
    check_close(lambdaPlus.values[1], lambda1, ten_to(-20), "lambda1+ closed form");
    check_close(lambdaMinus.values[0], -a1, ten_to(-20), "lambda1- closed form");

    // Partial sums taken straight from the binomial series, 60 terms.
    Real sumA0(0), sumA1(0), sumL1(0), sumL1m(0);
    for (long j = 0; j < 60; ++j) {
        Real sign = (j % 2 == 0) ? Real(1) : Real(-1);
        sumA0 += sign * binomial_real(2 * j, j) * pow(u, static_cast<unsigned>(2 * j + 1));
        sumA1 += sign * binomial_real(2 * j + 1, j + 1) * pow(u, static_cast<unsigned>(2 * j + 2));
        sumL1 += sign * binomial_real(2 * j + 2, j + 2) * pow(u, static_cast<unsigned>(2 * j + 3));
        sumL1m -= sign * binomial_real(2 * j + 1, j) * pow(u, static_cast<unsigned>(2 * j + 2));
    }
    check_close(sumA0, a0, ten_to(-20), "a0+ partial sum vs closed form");
    check_close(sumA1, a1, ten_to(-20), "a1+ partial sum vs closed form");
    check_close(sumL1, lambda1, ten_to(-20), "lambda1+ partial sum vs closed form");
    check_close(sumL1m, -a1, ten_to(-20), "lambda1- partial sum vs closed form");
    check_close(aPlus.values[0], sumA0, ten_to(-40), "seed vs partial sum");

    // The inverted ratio inside the square root is a frequent transcription
    // slip; it lands far from the series.
    Real qInverted = sqrt(1 + 1 / (4 * u * u));
    Real a1Wrong = (1 - 1 / qInverted) / 2;
    CHECK(abs(a1Wrong - sumA1) > 10 * ten_to(-20));
}

TEST_CASE("sequence recursions follow the fitted exponentials") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Real u("0.1");
    Model m = synthetic_ratio(u);
    Real v = m.wells.delta / (2 * m.pre.couplingB);
    Real root = sqrt(v * v + 1);

    auto aPlus = coefficient_sequence(SequenceKind::aPlus, 12, m.wells, m.pre, ctx);
    auto fitA = fit_exponentials(aPlus, m.wells, m.pre);
    check_close(fitA.exponentPlus, -v + root, ten_to(-50), "a+ growth exponent");
    check_small(fitA.coeffMinus, ten_to(-40), "a+ decaying branch is absent");
    check_close(fitA.coeffPlus, aPlus.values[0], ten_to(-42), "a+ amplitude");
    check_close(aPlus.values[1], aPlus.values[0] * fitA.exponentPlus, ten_to(-38),
                "first step equals one growth factor");
    // Both a-families keep only the |x| < 1 branch of their recursion, so
    // forward iteration amplifies seed rounding by roughly (1/u) per step
    // relative to the surviving values.  Depth 11 at u = 0.1 leaves about
    // twenty digits.
    check_close(aPlus.values[11],
                fitA.coeffPlus * pow(fitA.exponentPlus, 11u), ten_to(-18),
                "a+ reconstruction at depth");

    auto aMinus = coefficient_sequence(SequenceKind::aMinus, 12, m.wells, m.pre, ctx);
    auto fitB = fit_exponentials(aMinus, m.wells, m.pre);
    check_close(fitB.exponentPlus, v + root, ten_to(-50), "a- growth exponent");
    check_small(fitB.coeffPlus, ten_to(-40), "a- growing branch is absent");
    check_close(fitB.coeffMinus, -aPlus.values[0], ten_to(-42), "a- amplitude");
    check_close(aMinus.values[11],
                fitB.coeffMinus * pow(fitB.exponentMinus, 11u), ten_to(-18),
                "a- reconstruction at depth");

    auto lambdaPlus = coefficient_sequence(SequenceKind::lambdaPlus, 12, m.wells, m.pre, ctx);
    auto fitL = fit_exponentials(lambdaPlus, m.wells, m.pre);
    check_small(fitL.coeffMinus, ten_to(-48), "lambda+ decaying branch is absent");
    check_close(fitL.coeffPlus, lambdaPlus.values[0], ten_to(-45), "lambda+ amplitude");

    auto lambdaMinus = coefficient_sequence(SequenceKind::lambdaMinus, 6, m.wells, m.pre, ctx);
    auto fitM = fit_exponentials(lambdaMinus, m.wells, m.pre);
    check_close(fitM.exponentMinus, Real(-u), ten_to(-50), "lambda- homogeneous branch");
    for (int j = 2; j < 6; ++j) {
        // The source sequence feeds its amplified rounding into this one, so
        // the achievable agreement shrinks with depth as well.
        Real predicted = fitM.coeffPlus * pow(fitM.exponentPlus, static_cast<unsigned>(j + 1)) +
                         fitM.coeffMinus * pow(fitM.exponentMinus, static_cast<unsigned>(j + 1));
        check_close(lambdaMinus.values[j], predicted, ten_to(-32), "lambda- reconstruction");
    }
}

TEST_CASE("sequences are refused where their series diverge") {
    PrecisionContext ctx = PrecisionContext::with_digits(40);
    auto scope = ctx.scope();
    Model strong = model_for(1.0);
    try {
        coefficient_sequence(SequenceKind::aPlus, 4, strong.wells, strong.pre, ctx);
        FAIL("expected SeriesDivergenceError");
    } catch (const SeriesDivergenceError& err) {
        CHECK(err.ratio() > 1);
    }

    Model m = synthetic_ratio(Real("0.1"));
    CHECK_THROWS_AS(coefficient_sequence(SequenceKind::aPlus, 1, m.wells, m.pre, ctx),
                    std::invalid_argument);
    CoefficientSequence tooShort;
    tooShort.kind = SequenceKind::aPlus;
    tooShort.values = {Real(1)};
    CHECK_THROWS_AS(fit_exponentials(tooShort, m.wells, m.pre), std::invalid_argument);
}

TEST_CASE("level energies obey the exact sum rules") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Model m = model_for(30.0);
    auto levels = level_energies(m.wells, m.pre);
    CHECK(levels[0] < levels[1]);
    CHECK(levels[1] < levels[2]);
    check_close(levels[1], Real(30), ten_to(-55), "middle level sits at omega");
    Real gapLow = levels[1] - levels[0];
    Real gapHigh = levels[2] - levels[1];
    check_close(gapLow - gapHigh, m.wells.delta, ten_to(-50), "gap difference equals delta");
    check_close(levels[0] + levels[2], (m.wells.omega0 + m.wells.omega1) / 2, ten_to(-55),
                "outer levels balance around the mean");
    // Weak-coupling estimate of the upper gap.
    check_close(gapHigh, m.pre.couplingB * m.pre.couplingB / m.wells.delta, ten_to(-3),
                "upper gap estimate");
}

TEST_CASE("truncated amplitude sums converge to the closed forms") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    {
        Model m = model_for(30.0);
        Real T("0.1");
        for (auto transition : {Transition::zeroToOne, Transition::oneToOne}) {
            auto closed = transition == Transition::zeroToOne
                              ? amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm,
                                                 ctx)
                              : amplitude_1_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm,
                                                 ctx);
            auto truncated = transition == Transition::zeroToOne
                                 ? amplitude_0_to_1(T, m.wells, m.pre,
                                                    AmplitudeMethod::truncatedSum, ctx, 12)
                                 : amplitude_1_to_1(T, m.wells, m.pre,
                                                    AmplitudeMethod::truncatedSum, ctx, 12);
            check_close(truncated.value, closed.value, ten_to(-30), "omega=30 truncation");
        }
    }
    {
        Model m = model_for(1.0);
        Real T("0.5");
        auto closed01 = amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm, ctx);
        auto trunc01 = amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::truncatedSum, ctx);
        check_close(trunc01.value, closed01.value, ten_to(-13), "omega=1 hop amplitude");
        auto closed11 = amplitude_1_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm, ctx);
        auto trunc11 = amplitude_1_to_1(T, m.wells, m.pre, AmplitudeMethod::truncatedSum, ctx);
        check_close(trunc11.value, closed11.value, ten_to(-13), "omega=1 stay amplitude");
    }
}

TEST_CASE("hop amplitude pairs the outer exponents, not the middle one") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Model m = model_for(30.0);
    Real T("0.3");
    auto truncated = amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::truncatedSum, ctx, 24);
    auto closed = amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm, ctx);
    check_close(truncated.value, closed.value, ten_to(-12), "correct exponent pair");

    // Swapping the upper exponent for the middle level must be visible well
    // above the truncation error.
    Real variant = closed.prefactor * closed.weights[0] *
                   (exp(-closed.energies[0] * T) - exp(-closed.energies[1] * T));
    CHECK(abs(variant - truncated.value) / abs(truncated.value) > ten_to(-6));
}

TEST_CASE("amplitude decompositions expose their structure") {
    PrecisionContext ctx = PrecisionContext::with_digits(50);
    auto scope = ctx.scope();
    for (double omega : {1.0, 30.0, 50.0}) {
        Model m = model_for(omega);
        Real T("0.2");
        auto hop = amplitude_0_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm, ctx);
        CHECK(hop.weights[1] == 0);
        check_close(hop.weights[0], -hop.weights[2], ten_to(-45), "hop weights are opposite");
        CHECK(hop.transition == Transition::zeroToOne);

        auto stay = amplitude_1_to_1(T, m.wells, m.pre, AmplitudeMethod::closedForm, ctx);
        CHECK(stay.weights[0] >= 0);
        CHECK(stay.weights[1] == 1);
        CHECK(stay.weights[2] >= 0);
        check_close(stay.weights[0] + stay.weights[2], Real(1), ten_to(-45),
                    "outer stay weights sum to one");
        CHECK(stay.value > 0);
    }
    // Weak coupling: the lower stay weight shrinks like (B/delta)^2.
    Model weak = model_for(110.0);
    auto stay = amplitude_1_to_1(Real("0.2"), weak.wells, weak.pre,
                                 AmplitudeMethod::closedForm, ctx);
    Real u = weak.pre.couplingB / weak.wells.delta;
    check_close(stay.weights[0], u * u, ten_to(-3), "weak-coupling stay weight");
}

TEST_CASE("normalized spectral weights and their domain") {
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    auto scope = ctx.scope();
    Real u("0.1");
    Model m = synthetic_ratio(u);
    auto weights = spectral_weights(m.wells, m.pre);
    Real q = sqrt(1 + 4 * u * u);
    check_close(weights[0], (1 - 1 / q) / 4, ten_to(-50), "lower weight");
    CHECK(weights[1] == Real(1) / 2);
    check_close(weights[2], (1 + 1 / q) / 4, ten_to(-50), "upper weight");
    check_close(weights[0] + weights[1] + weights[2], Real(1), ten_to(-55), "weights normalize");

    Model strong = model_for(1.0);
    CHECK_THROWS_AS(spectral_weights(strong.wells, strong.pre), ConvergenceDomainError);
    // The amplitudes themselves remain defined there.
    CHECK_NOTHROW(amplitude_1_to_1(Real("0.5"), strong.wells, strong.pre,
                                   AmplitudeMethod::closedForm, ctx));
}
