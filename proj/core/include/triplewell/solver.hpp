#pragma once

#include "triplewell/potential.hpp"
#include "triplewell/precision.hpp"
#include "triplewell/spectrum.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace triplewell {

enum class Parity { even, odd };

// Knobs for one variational solve: basis functions per parity block, the
// oscillator frequency of the expansion basis, working precision, the
// eigensolver's off-diagonal stopping threshold (relative to the diagonal
// norm), and how many stable digits the caller is after.
struct EigenSolveConfig {
    long basisSize = 48;
    Real basisFrequency;  // must be set > 0 by the caller
    PrecisionContext ctx = PrecisionContext::with_digits(60);
    Real offDiagonalThreshold;  // defaulted to 10^(2-digits) when unset
    int targetDigits = 20;
};

// One parity sector of the Hamiltonian in the oscillator basis.  A degree-6
// potential couples |Delta n| <= 6 in the full basis, which folds to
// |i - j| <= 3 inside a parity block; everything beyond that is exactly zero.
struct HamiltonianBlock {
    Parity parity = Parity::even;
    long size = 0;
    long bandwidth = 0;
    std::vector<Real> entries;  // dense row-major, symmetric

    const Real& at(long i, long j) const { return entries[i * size + j]; }
    Real& at(long i, long j) { return entries[i * size + j]; }
};

struct EscalationStep {
    long basisSize;
    unsigned digits;
};

struct EigenResult {
    std::vector<Real> eigenvalues;  // ascending
    int stableDigits = 0;
    std::vector<EscalationStep> escalations;
};

// Jacobi sweeps failed to push the off-diagonal mass under the threshold.
class EigensolveFailureError : public std::runtime_error {
public:
    EigensolveFailureError(const std::string& what, Real residual)
        : std::runtime_error(what), residual_(std::move(residual)) {}
    const Real& residual() const { return residual_; }

private:
    Real residual_;
};

// The basis/precision escalation hit its limits before the requested digits
// stabilized; carries the best spectrum reached.
class EscalationBudgetError : public std::runtime_error {
public:
    EscalationBudgetError(const std::string& what, SpectrumTriplet best, EigenResult detail)
        : std::runtime_error(what), best_(std::move(best)), detail_(std::move(detail)) {}
    const SpectrumTriplet& best() const { return best_; }
    const EigenResult& detail() const { return detail_; }

private:
    SpectrumTriplet best_;
    EigenResult detail_;
};

struct EscalationLimits {
    long maxBasisSize = 600;
    unsigned maxDigits = 140;
};

// Exact oscillator-basis matrix of p^2/2 + V for one parity sector.
HamiltonianBlock build_hamiltonian(const TripleWellParams& params, const EigenSolveConfig& cfg,
                                   Parity parity);

// k smallest eigenvalues of the block by cyclic Jacobi rotations; each is a
// variational upper bound on the corresponding exact level of that sector.
std::vector<Real> solve_lowest(const HamiltonianBlock& block, long k,
                               const EigenSolveConfig& cfg);

// Escalates basis size and precision until the lowest three levels are stable
// to targetDigits, checking the two error sources independently.
std::pair<SpectrumTriplet, EigenResult> converged_spectrum(const TripleWellParams& params,
                                                           int targetDigits,
                                                           const PrecisionContext& ctx,
                                                           const EscalationLimits& limits = {});

}  // namespace triplewell
