#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace triplewell {

// Arbitrary-precision real. Newly constructed values pick up the thread-local
// default precision (decimal digits); see ScopedPrecision.
using Real = boost::multiprecision::mpfr_float;

// RAII guard: sets the thread default precision in decimal digits, restores
// the previous value on destruction.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned digits10) : saved_(Real::default_precision()) {
        Real::default_precision(digits10);
    }
    ~ScopedPrecision() { Real::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

// Re-round x at the current thread default precision. mpfr_float copies keep
// the source precision and arithmetic inherits operand precision, so values
// crossing a precision boundary must be snapped before use.
inline Real at_working_precision(const Real& x) {
    return Real(x, Real::default_precision());
}

// pi at the current default precision.
Real pi_value();

// Exact binomial coefficient C(n, k), rounded to the current precision.
Real binomial_real(unsigned long n, unsigned long k);

// Decimal representation carrying `digits` significant digits (0 = all stored
// digits). Output round-trips through Real(string) at the same precision.
std::string decimal_string(const Real& x, unsigned digits = 0);

}  // namespace triplewell
