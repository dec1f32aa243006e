#include "triplewell/dilute_gas.hpp"

#include "triplewell/simplex_quadrature.hpp"

#include <algorithm>
#include <functional>

namespace triplewell {

namespace {

struct Snapped {
    Real omega0;
    Real omega1;
    Real delta;
    Real B;
    Real N;
};

Snapped snap(const WellFrequencies& wells, const InstantonPrefactors& pre) {
    return {at_working_precision(wells.omega0), at_working_precision(wells.omega1),
            at_working_precision(wells.delta), at_working_precision(pre.couplingB),
            at_working_precision(pre.normalization)};
}

Real common_factor(const Snapped& s, const Real& T) {
    return exp(-(s.omega0 + s.omega1) * T / 4);
}

// Double binomial sum, common factor included: one branch per well frequency.
Real closed_form_value(long n, long m, const Real& T, const Snapped& s) {
    Real u = s.B / s.delta;
    Real BT = s.B * T;
    Real branch0(0);
    Real btPow(1);  // (BT)^i / i!
    for (long i = 0; i <= n; ++i) {
        Real term = binomial_real(m + n - i, m) * pow(u, static_cast<unsigned>(n + m - i + 1)) *
                    btPow;
        branch0 += ((n - i) % 2 == 0) ? term : Real(-term);
        btPow *= BT;
        btPow /= i + 1;
    }
    Real branch1(0);
    btPow = 1;
    for (long j = 0; j <= m; ++j) {
        Real term = binomial_real(m + n - j, n) * pow(u, static_cast<unsigned>(n + m - j + 1)) *
                    btPow;
        branch1 += term;
        btPow *= BT;
        btPow /= j + 1;
    }
    if (n % 2 == 0)  // overall (-1)^{n+1}
        branch1 = -branch1;
    return exp(-s.omega0 * T / 2) * branch0 + exp(-s.omega1 * T / 2) * branch1;
}

// Integration-by-parts recursion over the (n, m) rectangle, seeded at I(0,0).
// The recursion propagates the stripped value; the common factor is restored
// at the end.
Real recursive_value(long n, long m, const Real& T, const Snapped& s) {
    Real u = s.B / s.delta;
    Real BT = s.B * T;
    Real up = exp(s.delta * T / 2);
    Real down = exp(-s.delta * T / 2);
    long edge = std::max(n, m);
    std::vector<Real> fp(edge + 1);  // (BT)^k / k!
    fp[0] = 1;
    for (long k = 1; k <= edge; ++k)
        fp[k] = fp[k - 1] * BT / k;

    std::vector<std::vector<Real>> table(n + 1, std::vector<Real>(m + 1));
    table[0][0] = u * (up - down);
    for (long a = 1; a <= n; ++a)
        table[a][0] = u * (fp[a] * up - table[a - 1][0]);
    for (long b = 1; b <= m; ++b)
        table[0][b] = u * (table[0][b - 1] - fp[b] * down);
    for (long a = 1; a <= n; ++a)
        for (long b = 1; b <= m; ++b)
            table[a][b] = u * (table[a][b - 1] - table[a - 1][b]);
    return common_factor(s, T) * table[n][m];
}

// Nested ordered-time quadrature: n silent instanton times below the charged
// one, m above, nothing collapsed analytically.
Real oracle_value(long n, long m, const Real& T, const Snapped& s, const PrecisionContext& ctx) {
    std::vector<Real> charges(n + m + 1, Real(0));
    charges[n] = s.delta;
    Real nested = ordered_exponential_integral(charges, T, ctx);
    return pow(s.B, static_cast<unsigned>(n + m + 1)) * common_factor(s, T) * nested;
}

constexpr long kSeriesBudget = 400;

}  // namespace

BasicIntegralValue basic_integral(long n, long m, const Real& T, const WellFrequencies& wells,
                                  const InstantonPrefactors& pre, IntegralMethod method,
                                  const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    if (n < 0 || m < 0)
        throw std::invalid_argument("basic_integral: n and m must be non-negative");
    Real span = at_working_precision(T);
    if (!(span > 0))
        throw std::invalid_argument("basic_integral: T must be positive");
    Snapped s = snap(wells, pre);

    BasicIntegralValue out;
    out.n = n;
    out.m = m;
    out.timeSpan = span;
    out.includesCommonFactor = true;
    switch (method) {
        case IntegralMethod::closedForm:
            out.value = closed_form_value(n, m, span, s);
            break;
        case IntegralMethod::recursive:
            out.value = recursive_value(n, m, span, s);
            break;
        case IntegralMethod::quadratureOracle:
            if (n + m > 4)
                throw MethodDisallowedError(
                    "basic_integral: quadratureOracle is limited to n + m <= 4");
            out.value = oracle_value(n, m, span, s, ctx);
            break;
    }
    return out;
}

BasicIntegralValue with_common_factor(const BasicIntegralValue& value,
                                      const WellFrequencies& wells, bool include,
                                      const PrecisionContext& ctx) {
    if (value.includesCommonFactor == include)
        return value;
    auto scope = ctx.scope();
    Real cf = exp(-(at_working_precision(wells.omega0) + at_working_precision(wells.omega1)) *
                  value.timeSpan / 4);
    BasicIntegralValue out = value;
    out.value = include ? Real(value.value * cf) : Real(value.value / cf);
    out.includesCommonFactor = include;
    return out;
}

Real odd_term(long i, const Real& T, const WellFrequencies& wells, const InstantonPrefactors& pre,
              const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    if (i < 0)
        throw std::invalid_argument("odd_term: i must be non-negative");
    Real integral = basic_integral(i, i, T, wells, pre, IntegralMethod::closedForm, ctx).value;
    return at_working_precision(pre.normalization) / sqrt(Real(2)) * integral;
}

Real even_term(long i, const Real& T, const WellFrequencies& wells, const InstantonPrefactors& pre,
               const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    if (i < 1)
        throw std::invalid_argument("even_term: i must be at least 1");
    Real integral = basic_integral(i - 1, i, T, wells, pre, IntegralMethod::closedForm, ctx).value;
    return at_working_precision(pre.normalization) / 2 * integral;
}

CoefficientSequence coefficient_sequence(SequenceKind kind, int count,
                                         const WellFrequencies& wells,
                                         const InstantonPrefactors& pre,
                                         const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    if (count < 2)
        throw std::invalid_argument("coefficient_sequence: count must be at least 2");
    Snapped s = snap(wells, pre);
    Real u = s.B / s.delta;
    if (2 * u >= 1)
        throw SeriesDivergenceError(
            "coefficient_sequence: defining series converge only for 2B/delta < 1", u);

    auto summed = [&](const std::function<Real(long)>& term, const char* what) {
        SeriesSum sum = sum_series(term, ctx, kSeriesBudget);
        if (!sum.converged)
            throw SeriesDivergenceError(std::string("coefficient_sequence: ") + what +
                                            " did not converge within the term budget",
                                        u);
        return sum.value;
    };

    // Series from the closed-form integral family: signs follow the binomial
    // expansions term by term.
    auto a0Series = [&](long j) {
        Real t = binomial_real(2 * j, j) * pow(u, static_cast<unsigned>(2 * j + 1));
        return j % 2 == 0 ? t : Real(-t);
    };
    auto a1Series = [&](long j) {
        Real t = binomial_real(2 * j + 1, j + 1) * pow(u, static_cast<unsigned>(2 * j + 2));
        return j % 2 == 0 ? t : Real(-t);
    };
    auto lambda1PlusSeries = [&](long j) {
        Real t = binomial_real(2 * j + 2, j + 2) * pow(u, static_cast<unsigned>(2 * j + 3));
        return j % 2 == 0 ? t : Real(-t);
    };
    auto lambda1MinusSeries = [&](long j) {
        Real t = binomial_real(2 * j + 1, j) * pow(u, static_cast<unsigned>(2 * j + 2));
        return j % 2 == 0 ? Real(-t) : t;
    };

    auto buildAMinus = [&](int n) {
        std::vector<Real> values(n);
        values[0] = -summed(a0Series, "a0- seed");
        values[1] = summed(a1Series, "a1- seed");
        for (int i = 2; i < n; ++i)
            values[i] = values[i - 2] + values[i - 1] / u;
        return values;
    };

    CoefficientSequence out;
    out.kind = kind;
    out.ratio = u;
    out.values.resize(count);
    switch (kind) {
        case SequenceKind::aPlus:
            out.values[0] = summed(a0Series, "a0+ seed");
            out.values[1] = summed(a1Series, "a1+ seed");
            for (int i = 2; i < count; ++i)
                out.values[i] = out.values[i - 2] - out.values[i - 1] / u;
            break;
        case SequenceKind::aMinus:
            out.values = buildAMinus(count);
            break;
        case SequenceKind::lambdaPlus:
            out.values[0] = summed(a1Series, "lambda0+ seed");
            out.values[1] = summed(lambda1PlusSeries, "lambda1+ seed");
            for (int i = 2; i < count; ++i)
                out.values[i] = out.values[i - 2] - out.values[i - 1] / u;
            break;
        case SequenceKind::lambdaMinus: {
            // values[j] holds Lambda^-_{j+1}; the family is generated forward
            // by the first-order relation with the a^- family as source.
            std::vector<Real> source = buildAMinus(count);
            out.values[0] = summed(lambda1MinusSeries, "lambda1- seed");
            for (int j = 1; j < count; ++j)
                out.values[j] = u * (source[j] - out.values[j - 1]);
            break;
        }
    }
    return out;
}

ExponentialFitResult fit_exponentials(const CoefficientSequence& seq,
                                      const WellFrequencies& wells,
                                      const InstantonPrefactors& pre) {
    if (seq.values.size() < 2)
        throw std::invalid_argument("fit_exponentials: need at least two sequence values");
    Real delta = at_working_precision(wells.delta);
    Real B = at_working_precision(pre.couplingB);
    Real v = delta / (2 * B);
    Real root = sqrt(v * v + 1);

    Real xPlus, xMinus;
    long baseIndex = 0;
    switch (seq.kind) {
        case SequenceKind::aPlus:
        case SequenceKind::lambdaPlus:
            xPlus = -v + root;
            xMinus = -v - root;
            break;
        case SequenceKind::aMinus:
            xPlus = v + root;
            xMinus = v - root;
            break;
        case SequenceKind::lambdaMinus:
            xPlus = v - root;      // geometric branch inherited from a^-
            xMinus = -B / delta;   // homogeneous branch of the first-order relation
            baseIndex = 1;         // stored values start at family index 1
            break;
    }
    if (xPlus == xMinus)
        throw SingularSystemError("fit_exponentials: coincident exponents");

    Real z0 = at_working_precision(seq.values[0]);
    Real z1 = at_working_precision(seq.values[1]);
    Real det = xPlus - xMinus;
    Real coeffPlus = (z1 - xMinus * z0) / det;
    Real coeffMinus = (xPlus * z0 - z1) / det;
    if (baseIndex == 1) {
        coeffPlus /= xPlus;
        coeffMinus /= xMinus;
    }
    return {coeffPlus, coeffMinus, xPlus, xMinus};
}

std::array<Real, 3> level_energies(const WellFrequencies& wells, const InstantonPrefactors& pre) {
    Real omega0 = at_working_precision(wells.omega0);
    Real omega1 = at_working_precision(wells.omega1);
    Real delta = at_working_precision(wells.delta);
    Real B = at_working_precision(pre.couplingB);
    Real mid = (omega0 + omega1) / 4;
    Real root = sqrt(delta * delta / 4 + B * B);
    return {Real(mid - root), Real(omega1 / 2), Real(mid + root)};
}

namespace {

AmplitudeDecomposition assemble_amplitude(Transition transition, const Real& T, const Snapped& s,
                                          const WellFrequencies& wells,
                                          const InstantonPrefactors& pre, AmplitudeMethod method,
                                          const PrecisionContext& ctx, int maxI) {
    if (!(at_working_precision(T) > 0))
        throw std::invalid_argument("amplitude: T must be positive");
    if (maxI < 0)
        throw std::invalid_argument("amplitude: maxI must be non-negative");

    AmplitudeDecomposition out;
    out.transition = transition;
    out.timeSpan = at_working_precision(T);
    out.energies = level_energies(wells, pre);

    Real q = sqrt(1 + pow(2 * s.B / s.delta, 2u));
    if (transition == Transition::zeroToOne) {
        Real cPlus = (s.B / s.delta) / q;
        out.prefactor = s.N / sqrt(Real(2));
        out.weights = {cPlus, Real(0), Real(-cPlus)};
    } else {
        out.prefactor = s.N / 2;
        out.weights = {Real(Real(1) / 2 - Real(1) / (2 * q)), Real(1),
                       Real(Real(1) / 2 + Real(1) / (2 * q))};
    }

    if (method == AmplitudeMethod::closedForm) {
        Real value(0);
        for (int k = 0; k < 3; ++k)
            value += out.weights[k] * exp(-out.energies[k] * out.timeSpan);
        out.value = out.prefactor * value;
    } else if (transition == Transition::zeroToOne) {
        Real sum(0);
        for (long i = 0; i <= maxI; ++i)
            sum += basic_integral(i, i, T, wells, pre, IntegralMethod::closedForm, ctx).value;
        out.value = s.N / sqrt(Real(2)) * sum;
    } else {
        Real sum(0);
        for (long i = 1; i <= maxI; ++i)
            sum += basic_integral(i - 1, i, T, wells, pre, IntegralMethod::closedForm, ctx).value;
        out.value = s.N * exp(-s.omega1 * out.timeSpan / 2) + s.N / 2 * sum;
    }
    return out;
}

}  // namespace

AmplitudeDecomposition amplitude_0_to_1(const Real& T, const WellFrequencies& wells,
                                        const InstantonPrefactors& pre, AmplitudeMethod method,
                                        const PrecisionContext& ctx, int maxI) {
    auto scope = ctx.scope();
    return assemble_amplitude(Transition::zeroToOne, T, snap(wells, pre), wells, pre, method, ctx,
                              maxI);
}

AmplitudeDecomposition amplitude_1_to_1(const Real& T, const WellFrequencies& wells,
                                        const InstantonPrefactors& pre, AmplitudeMethod method,
                                        const PrecisionContext& ctx, int maxI) {
    auto scope = ctx.scope();
    return assemble_amplitude(Transition::oneToOne, T, snap(wells, pre), wells, pre, method, ctx,
                              maxI);
}

std::array<Real, 3> spectral_weights(const WellFrequencies& wells, const InstantonPrefactors& pre) {
    Real delta = at_working_precision(wells.delta);
    Real B = at_working_precision(pre.couplingB);
    if (2 * B >= delta)
        throw ConvergenceDomainError("spectral_weights: requires 2B < delta");
    Real q = sqrt(1 + pow(2 * B / delta, 2u));
    Real half(Real(1) / 2);
    Real lower = (half - half / q) / 2;
    Real upper = (half + half / q) / 2;
    return {lower, half, upper};
}

}  // namespace triplewell
