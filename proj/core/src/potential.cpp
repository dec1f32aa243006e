#include "triplewell/potential.hpp"

#include <stdexcept>

namespace triplewell {

namespace {

void require_valid(const TripleWellParams& params) {
    if (!(params.omega > 0))
        throw std::invalid_argument("TripleWellParams: omega must be positive");
}

// Exponent sign in [1 + e^{s}]^{-1/2}: negative s means the trajectory has
// reached the outer well as t -> +inf (an instanton), positive s the reverse.
int exponent_sign(ProfileKind kind) {
    return (kind == ProfileKind::instantonRight || kind == ProfileKind::instantonLeft) ? -1 : 1;
}

int well_sign(ProfileKind kind) {
    return (kind == ProfileKind::instantonRight || kind == ProfileKind::antiInstantonRight) ? 1
                                                                                           : -1;
}

}  // namespace

Real eval_potential(const TripleWellParams& params, const Real& x, int derivativeOrder) {
    require_valid(params);
    Real w = at_working_precision(params.omega);
    Real xx = at_working_precision(x);
    Real x2 = xx * xx;
    switch (derivativeOrder) {
        case 0: {
            Real ring = x2 - 1;
            return w * w / 2 * x2 * ring * ring;
        }
        case 1:
            return w * w * xx * (x2 - 1) * (3 * x2 - 1);
        case 2:
            return w * w * (15 * x2 * x2 - 12 * x2 + 1);
        default:
            throw std::invalid_argument("eval_potential: derivativeOrder must be 0, 1 or 2");
    }
}

WellFrequencies well_frequencies(const TripleWellParams& params) {
    require_valid(params);
    Real w = at_working_precision(params.omega);
    return WellFrequencies{w, 2 * w, w / 2};
}

Real instanton_profile(const TripleWellParams& params, const InstantonProfile& profile,
                       const Real& t) {
    require_valid(params);
    Real w = at_working_precision(params.omega);
    Real tau = at_working_precision(t) - at_working_precision(profile.center);
    Real s = exponent_sign(profile.kind) * 2 * w * tau;
    return well_sign(profile.kind) / sqrt(1 + exp(s));
}

Real profile_velocity(const TripleWellParams& params, const InstantonProfile& profile,
                      const Real& t) {
    require_valid(params);
    Real w = at_working_precision(params.omega);
    Real tau = at_working_precision(t) - at_working_precision(profile.center);
    Real s = exponent_sign(profile.kind) * 2 * w * tau;
    // |dx/dt| = omega e^{s} (1 + e^{s})^{-3/2}, exact and cancellation-free.
    Real es = exp(s);
    Real magnitude = w * es / ((1 + es) * sqrt(1 + es));
    int direction = -exponent_sign(profile.kind) * well_sign(profile.kind);
    return direction * magnitude;
}

Real classical_action(const TripleWellParams& params, ActionMethod method,
                      const PrecisionContext& ctx) {
    require_valid(params);
    auto scope = ctx.scope();
    Real w = at_working_precision(params.omega);
    if (method == ActionMethod::analytic)
        return w / 4;
    auto speed = [&](const Real& x) { return sqrt(2 * eval_potential(params, x, 0)); };
    return integrate_adaptive(speed, Real(0), Real(1), ctx);
}

InstantonPrefactors instanton_prefactors(const TripleWellParams& params) {
    require_valid(params);
    Real w = at_working_precision(params.omega);
    InstantonPrefactors pre;
    pre.action = w / 4;
    pre.fluctuationFactor = exp(-pre.action);
    pre.couplingB = 8 / sqrt(3 * pi_value()) * w * sqrt(w) * pre.fluctuationFactor;
    pre.matchingFactor = pre.couplingB / (sqrt(Real(2)) * pre.fluctuationFactor);
    pre.normalization = sqrt(w / (2 * pi_value()));
    return pre;
}

}  // namespace triplewell
