#pragma once

#include "triplewell/real.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace triplewell {

// Working precision plus the tolerances derived from it. Threaded explicitly
// through every numerical routine so a caller can tighten or relax a whole
// computation in one place.
struct PrecisionContext {
    unsigned digits = 60;           // decimal digits of working precision
    double quadTolerance = 1e-40;   // relative tolerance for adaptive quadrature
    double seriesTolerance = 1e-40; // relative tail bound for series summation

    // Context with tolerances scaled to the precision: 10^-(digits - 20),
    // leaving twenty guard digits between tolerance and representable noise.
    static PrecisionContext with_digits(unsigned digits);

    // Default context, unless TRIPLEWELL_DIGITS is set to a positive integer,
    // in which case that digit count (floored at 30) is used.
    static PrecisionContext from_environment();

    // Throws std::invalid_argument unless digits >= 30 and both tolerances
    // lie strictly between 0 and 1.
    void validate() const;

    // Validates, then installs `digits` as the thread default precision for
    // the lifetime of the returned guard.
    ScopedPrecision scope() const {
        validate();
        return ScopedPrecision(digits);
    }
};

struct SeriesSum {
    Real value{0};
    long termsUsed = 0;
    bool converged = false;
    Real lastTermMagnitude{0};
};

// Raised when adaptive subdivision hits its depth limit; carries the offending
// panel so the caller can see where the integrand resisted.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, Real panelLower, Real panelUpper)
        : std::runtime_error(what), lower_(std::move(panelLower)), upper_(std::move(panelUpper)) {}

    const Real& panel_lower() const { return lower_; }
    const Real& panel_upper() const { return upper_; }

private:
    Real lower_;
    Real upper_;
};

// Definite integral of f over [a, b] (a <= b), adaptive Gauss-Legendre with
// panel-local error control against ctx.quadTolerance relative to the overall
// integral scale. Deterministic: equal inputs give bit-identical results.
Real integrate_adaptive(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                        const PrecisionContext& ctx);

// Sum of term(0) + term(1) + ... until two consecutive terms fall below
// ctx.seriesTolerance relative to the running sum (with an absolute floor of
// 10^-(2*digits) so an identically zero series still converges), or until
// maxTerms terms have been taken, whichever comes first.
SeriesSum sum_series(const std::function<Real(long)>& term, const PrecisionContext& ctx,
                     long maxTerms = 200);

}  // namespace triplewell
