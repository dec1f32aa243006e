#pragma once

#include "triplewell/solver.hpp"

namespace triplewell::detail {

// Even polynomial c2 x^2 + c4 x^4 + c6 x^6.  The production potential is one
// instance; the test suite instantiates others (notably the pure oscillator,
// whose spectrum is known exactly) against the same assembly code.
struct EvenPolynomialPotential {
    Real c2;
    Real c4;
    Real c6;
};

HamiltonianBlock build_polynomial_hamiltonian(const EvenPolynomialPotential& potential,
                                              const EigenSolveConfig& cfg, Parity parity);

}  // namespace triplewell::detail
