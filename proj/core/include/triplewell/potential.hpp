#pragma once

#include "triplewell/precision.hpp"
#include "triplewell/real.hpp"

namespace triplewell {

// The symmetric triple well V(x) = omega^2/2 * x^2 (x^2 - 1)^2: minima at
// x = 0 (curvature omega^2) and x = +-1 (curvature 4 omega^2).
struct TripleWellParams {
    Real omega;  // > 0
};

// Harmonic frequencies of the central and side wells and their half-gap.
struct WellFrequencies {
    Real omega0;  // central well, = omega
    Real omega1;  // side wells, = 2 omega
    Real delta;   // (omega1 - omega0) / 2 = omega / 2
};

// The four tunneling trajectories between adjacent minima. "Right"/"Left"
// names the side well involved; instantons leave the central well, anti-
// instantons return to it.
enum class ProfileKind {
    instantonRight,      // 0 -> +1
    instantonLeft,       // 0 -> -1
    antiInstantonRight,  // +1 -> 0
    antiInstantonLeft,   // -1 -> 0
};

struct InstantonProfile {
    ProfileKind kind;
    Real center;  // Euclidean time t0 of the jump
};

// Single-instanton data entering the dilute-gas sums.
struct InstantonPrefactors {
    Real action;             // S0 = omega / 4
    Real fluctuationFactor;  // A = e^{-S0}
    Real matchingFactor;     // K, with B = sqrt(2) K A
    Real couplingB;          // B = 8 / sqrt(3 pi) * omega^{3/2} * e^{-omega/4}
    Real normalization;      // N = sqrt(omega / (2 pi))
};

enum class ActionMethod { analytic, quadrature };

// V, V' or V'' at x depending on derivativeOrder (0, 1 or 2).
Real eval_potential(const TripleWellParams& params, const Real& x, int derivativeOrder = 0);

WellFrequencies well_frequencies(const TripleWellParams& params);

// Position x(t) of the chosen trajectory: x = +-[1 + e^{-+2 omega (t - t0)}]^{-1/2}.
Real instanton_profile(const TripleWellParams& params, const InstantonProfile& profile,
                       const Real& t);

// Analytic Euclidean velocity dx/dt of the trajectory; satisfies the zero-
// energy condition (dx/dt)^2 = 2 V(x) at every t.
Real profile_velocity(const TripleWellParams& params, const InstantonProfile& profile,
                      const Real& t);

// S0, either as the closed form omega/4 or as the quadrature of sqrt(2V)
// between adjacent minima.
Real classical_action(const TripleWellParams& params, ActionMethod method,
                      const PrecisionContext& ctx);

// All single-instanton prefactors, evaluated at the current thread default
// precision (wrap in a ScopedPrecision or PrecisionContext::scope to choose).
InstantonPrefactors instanton_prefactors(const TripleWellParams& params);

}  // namespace triplewell
