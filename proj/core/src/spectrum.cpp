#include "triplewell/spectrum.hpp"

namespace triplewell {

SpectrumTriplet instanton_spectrum(const TripleWellParams& params, const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    WellFrequencies wells = well_frequencies(params);
    InstantonPrefactors pre = instanton_prefactors(params);
    auto levels = level_energies(wells, pre);
    return {levels[0], levels[1], levels[2], SpectrumMethod::instanton};
}

SplittingPair energy_differences(const SpectrumTriplet& spectrum) {
    Real e0 = at_working_precision(spectrum.e0);
    Real e1 = at_working_precision(spectrum.e1);
    Real e2 = at_working_precision(spectrum.e2);
    return {Real(e1 - e0), Real(e2 - e1)};
}

std::pair<Real, Real> asymptotic_limits(const TripleWellParams& params) {
    Real omega = at_working_precision(params.omega);
    return {Real(omega / 2), omega};
}

}  // namespace triplewell
