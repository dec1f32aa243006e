#include "triplewell/simplex_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace triplewell {

namespace {

// One cumulative-integral level, tabulated at Chebyshev points of the second
// kind (ascending, endpoints included) over [-T/2, T/2].
struct ChebLevel {
    std::vector<Real> nodes;
    std::vector<Real> values;
};

std::vector<Real> chebyshev_nodes(const Real& halfSpan, int count) {
    std::vector<Real> nodes(count);
    Real pi = pi_value();
    for (int j = 0; j < count; ++j) {
        // cos runs 1 -> -1; fill in reverse for ascending order
        nodes[count - 1 - j] = halfSpan * cos(pi * j / (count - 1));
    }
    nodes.front() = -halfSpan;
    nodes.back() = halfSpan;
    if (count % 2 == 1)
        nodes[count / 2] = 0;
    return nodes;
}

// Barycentric evaluation on second-kind Chebyshev points: weights are
// (-1)^j, halved at the two endpoints.
Real interpolate(const ChebLevel& level, const Real& t) {
    const std::size_t count = level.nodes.size();
    Real num(0), den(0);
    for (std::size_t j = 0; j < count; ++j) {
        Real diff = t - level.nodes[j];
        if (diff == 0)
            return level.values[j];
        Real w = (j % 2 == 0) ? Real(1) : Real(-1);
        if (j == 0 || j == count - 1)
            w /= 2;
        Real ratio = w / diff;
        num += ratio * level.values[j];
        den += ratio;
    }
    return num / den;
}

// Largest magnitude of a contiguous-window sum of the charges: bounds every
// exponential frequency appearing in the cumulative integrals, which sets the
// Chebyshev resolution needed per level.
Real max_window_charge(const std::vector<Real>& charges) {
    Real best(0);
    for (std::size_t p = 0; p < charges.size(); ++p) {
        Real run(0);
        for (std::size_t q = p; q < charges.size(); ++q) {
            run += charges[q];
            if (abs(run) > best)
                best = abs(run);
        }
    }
    return best;
}

}  // namespace

Real ordered_exponential_integral(const std::vector<Real>& charges, const Real& T,
                                  const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    Real span = at_working_precision(T);
    if (!(span > 0))
        throw std::invalid_argument("ordered_exponential_integral: T must be positive");
    if (charges.empty())
        return Real(1);

    Real half = span / 2;
    // Node count: enough for the coefficient decay of e^{a t} on the span
    // (rate a*T/2) plus one polynomial degree per level, with headroom.
    Real a = max_window_charge(charges) * half;
    long resolution = static_cast<long>(std::ceil(static_cast<double>(2 * a)));
    int count = static_cast<int>(41 + charges.size() + resolution);

    ChebLevel level;
    level.nodes = chebyshev_nodes(half, count);

    for (std::size_t depth = 0; depth < charges.size(); ++depth) {
        Real c = at_working_precision(charges[depth]);
        bool first = depth == 0;
        auto integrand = [&](const Real& s) -> Real {
            Real base = first ? Real(1) : interpolate(level, s);
            if (c == 0)
                return base;
            return Real(exp(c * s) * base);
        };
        std::vector<Real> next(count);
        next[0] = 0;
        for (int j = 1; j < count; ++j)
            next[j] =
                next[j - 1] + integrate_adaptive(integrand, level.nodes[j - 1], level.nodes[j], ctx);
        level.values = std::move(next);
    }
    return level.values.back();
}

}  // namespace triplewell
