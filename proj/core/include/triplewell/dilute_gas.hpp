#pragma once

#include "triplewell/potential.hpp"
#include "triplewell/precision.hpp"
#include "triplewell/real.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace triplewell {

// Requested evaluation method outside its supported range (the nested
// quadrature oracle is cost-capped at n + m <= 4).
class MethodDisallowedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A defining series was requested outside its convergence disc (2B >= delta)
// or did not meet tolerance within the term budget.
class SeriesDivergenceError : public std::runtime_error {
public:
    SeriesDivergenceError(const std::string& what, Real ratio)
        : std::runtime_error(what), ratio_(std::move(ratio)) {}
    const Real& ratio() const { return ratio_; }  // B/delta at the call

private:
    Real ratio_;
};

// The 2x2 exponential fit degenerated (coincident exponents).
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request outside the domain 2B < delta in which the weight derivation holds.
class ConvergenceDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// One member of the two-parameter integral family
//
//   I(n,m;T) = B^{n+m+1} e^{-(omega0+omega1)T/4}
//              int_{-T/2}^{T/2} e^{delta t} (T/2+t)^n/n! (T/2-t)^m/m! dt,
//
// the building block of every multi-instanton sum.
struct BasicIntegralValue {
    long n = 0;
    long m = 0;
    Real timeSpan;
    Real value;
    bool includesCommonFactor = true;  // whether e^{-(omega0+omega1)T/4} is included
};

enum class IntegralMethod {
    closedForm,       // double binomial sum
    recursive,        // integration-by-parts recursion from I(0,0)
    quadratureOracle  // nested ordered-time quadrature, n+m <= 4 only
};

// The four coefficient families extracted from the instanton sums: a_i+-
// multiply (BT)^i/i! e^{-omega_{0,1} T/2} in the 0->1 sum, Lambda_i+- play the
// same role in the 1->1 sum.
enum class SequenceKind { aPlus, aMinus, lambdaPlus, lambdaMinus };

struct CoefficientSequence {
    SequenceKind kind;
    // aPlus/aMinus/lambdaPlus: values[i] is the i-th coefficient (from 0).
    // lambdaMinus: the family starts at index 1, so values[j] holds
    // Lambda^-_{j+1}.
    std::vector<Real> values;
    Real ratio;  // B/delta used to generate them
};

// Result of fitting values[i] = coeffPlus * exponentPlus^i +
// coeffMinus * exponentMinus^i, where the exponents are the characteristic
// roots of the family's own recursion: -delta/(2B) +- sqrt((delta/2B)^2+1)
// for aPlus and lambdaPlus, the sign-mirrored pair for aMinus, and
// {delta/(2B) - sqrt((delta/2B)^2+1), -B/delta} for the inhomogeneous
// lambdaMinus family.
struct ExponentialFitResult {
    Real coeffPlus;
    Real coeffMinus;
    Real exponentPlus;
    Real exponentMinus;
};

enum class Transition { zeroToOne, oneToOne };
enum class AmplitudeMethod { truncatedSum, closedForm };

// Transition amplitude organized as prefactor * sum_i weights[i] e^{-E_i T}.
// energies and weights always carry the closed-form decomposition; value is
// the amplitude actually computed at timeSpan by the requested method.
struct AmplitudeDecomposition {
    std::array<Real, 3> energies;
    std::array<Real, 3> weights;
    Real prefactor;
    Transition transition;
    Real timeSpan;
    Real value;
};

BasicIntegralValue basic_integral(long n, long m, const Real& T, const WellFrequencies& wells,
                                  const InstantonPrefactors& pre, IntegralMethod method,
                                  const PrecisionContext& ctx);

// Same integral with the overall e^{-(omega0+omega1)T/4} factor present or
// stripped, converting as needed.
BasicIntegralValue with_common_factor(const BasicIntegralValue& value,
                                      const WellFrequencies& wells, bool include,
                                      const PrecisionContext& ctx);

// i-th odd-chain term (i+1 instantons, i anti-instantons, 2^i arrangements):
// M_i^odd = (N/sqrt 2) I(i,i;T).
Real odd_term(long i, const Real& T, const WellFrequencies& wells, const InstantonPrefactors& pre,
              const PrecisionContext& ctx);

// i-th even-chain term (i of each, 2^{i-1} arrangements), defined for i >= 1:
// M_i^even = (N/2) I(i-1,i;T).
Real even_term(long i, const Real& T, const WellFrequencies& wells, const InstantonPrefactors& pre,
               const PrecisionContext& ctx);

// First `count` members of the family, seeded from the defining series and
// extended by the family recursion. Throws SeriesDivergenceError when
// 2B/delta >= 1 (the seed series only converge inside that disc).
CoefficientSequence coefficient_sequence(SequenceKind kind, int count,
                                         const WellFrequencies& wells,
                                         const InstantonPrefactors& pre,
                                         const PrecisionContext& ctx);

// Two-exponential fit through the first two stored values; evaluated at the
// current thread default precision.
ExponentialFitResult fit_exponentials(const CoefficientSequence& seq,
                                      const WellFrequencies& wells,
                                      const InstantonPrefactors& pre);

// <1|e^{-HT}|0> dilute-gas amplitude: truncatedSum adds M_i^odd for i <= maxI,
// closedForm evaluates the resummed two-exponential expression. Both converge
// for every positive B and delta (the closed form continues the seed-series
// algebra analytically).
AmplitudeDecomposition amplitude_0_to_1(const Real& T, const WellFrequencies& wells,
                                        const InstantonPrefactors& pre, AmplitudeMethod method,
                                        const PrecisionContext& ctx, int maxI = 24);

// <1|e^{-HT}|1> amplitude including the trivial (no-tunneling) contribution
// N e^{-omega1 T/2}; truncatedSum adds M_i^even for 1 <= i <= maxI.
AmplitudeDecomposition amplitude_1_to_1(const Real& T, const WellFrequencies& wells,
                                        const InstantonPrefactors& pre, AmplitudeMethod method,
                                        const PrecisionContext& ctx, int maxI = 24);

// Unit-normalized weights of {e^{-E0 T}, e^{-E1 T}, e^{-E2 T}} in the 1->1
// amplitude; restricted to the derivation's domain 2B < delta.
std::array<Real, 3> spectral_weights(const WellFrequencies& wells, const InstantonPrefactors& pre);

// The closed-form level triple (E0, E1, E2) shared by the amplitude
// decompositions and the spectrum module; current default precision.
std::array<Real, 3> level_energies(const WellFrequencies& wells, const InstantonPrefactors& pre);

}  // namespace triplewell
