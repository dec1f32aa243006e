#pragma once

#include "triplewell/dilute_gas.hpp"
#include "triplewell/potential.hpp"

#include <utility>

namespace triplewell {

enum class SpectrumMethod { instanton, numeric };

// Lowest three levels in ascending order.  For the instanton method the
// middle level sits at omega1/2 exactly and the outer pair straddles
// (omega0+omega1)/4 symmetrically.
struct SpectrumTriplet {
    Real e0;
    Real e1;
    Real e2;
    SpectrumMethod method = SpectrumMethod::instanton;
};

struct SplittingPair {
    Real delta10;  // e1 - e0
    Real delta21;  // e2 - e1
};

// Closed-form spectrum of the lowest triplet.
SpectrumTriplet instanton_spectrum(const TripleWellParams& params, const PrecisionContext& ctx);

SplittingPair energy_differences(const SpectrumTriplet& spectrum);

// Deep-well limits (omega/2 for the singlet, omega for the doublet), mainly
// for comparison output.
std::pair<Real, Real> asymptotic_limits(const TripleWellParams& params);

}  // namespace triplewell
