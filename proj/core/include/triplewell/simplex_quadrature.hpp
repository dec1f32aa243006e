#pragma once

#include "triplewell/precision.hpp"
#include "triplewell/real.hpp"

#include <vector>

namespace triplewell {

// Ordered-time integral
//
//   int_{-T/2 <= t_1 <= t_2 <= ... <= t_k <= T/2}  prod_j exp(charges[j] * t_j)
//
// evaluated by iterated adaptive quadrature: the cumulative inner integral of
// each level is sampled at Chebyshev nodes (each node-to-node segment
// integrated adaptively) and carried to the next level as a barycentric
// interpolant. No closed-form collapse of any level is used, which makes this
// the reference evaluator the algebraic forms are checked against.
//
// An empty charge list integrates over the empty product and returns 1.
Real ordered_exponential_integral(const std::vector<Real>& charges, const Real& T,
                                  const PrecisionContext& ctx);

}  // namespace triplewell
