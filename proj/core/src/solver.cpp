#include "triplewell/solver.hpp"

#include "solver_detail.hpp"
#include "triplewell/dilute_gas.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <utility>

namespace triplewell {

namespace {

// Symmetric matrix with nonzero entries only on even offsets from the
// diagonal, stored band by band: bands[j][n] = <n+2j|M|n>.
struct SymBanded {
    long size = 0;
    std::vector<std::vector<Real>> bands;

    Real at(long i, long k) const {
        long d = i >= k ? i - k : k - i;
        if (d % 2 != 0)
            return Real(0);
        long j = d / 2;
        if (j >= static_cast<long>(bands.size()))
            return Real(0);
        return bands[j][std::min(i, k)];
    }
};

SymBanded multiply(const SymBanded& lhs, const SymBanded& rhs) {
    SymBanded out;
    out.size = lhs.size;
    long lhsReach = 2 * (static_cast<long>(lhs.bands.size()) - 1);
    long rhsReach = 2 * (static_cast<long>(rhs.bands.size()) - 1);
    out.bands.resize((lhsReach + rhsReach) / 2 + 1);
    for (long j = 0; j < static_cast<long>(out.bands.size()); ++j) {
        long len = std::max(out.size - 2 * j, 0L);
        out.bands[j].assign(len, Real(0));
        for (long n = 0; n < len; ++n) {
            long i = n + 2 * j;
            long lo = std::max({0L, i - lhsReach, n - rhsReach});
            long hi = std::min({out.size - 1, i + lhsReach, n + rhsReach});
            if ((lo - n) % 2 != 0)
                ++lo;
            Real sum(0);
            for (long r = lo; r <= hi; r += 2)
                sum += lhs.at(i, r) * rhs.at(r, n);
            out.bands[j][n] = sum;
        }
    }
    return out;
}

long full_index(Parity parity, long blockIndex) {
    return 2 * blockIndex + (parity == Parity::odd ? 1 : 0);
}

}  // namespace

namespace detail {

HamiltonianBlock build_polynomial_hamiltonian(const EvenPolynomialPotential& potential,
                                              const EigenSolveConfig& cfg, Parity parity) {
    auto scope = cfg.ctx.scope();
    if (cfg.basisSize < 20)
        throw std::invalid_argument("build_hamiltonian: basisSize must be at least 20");
    Real frequency = at_working_precision(cfg.basisFrequency);
    if (!(frequency > 0))
        throw std::invalid_argument("build_hamiltonian: basisFrequency must be positive");

    long N = cfg.basisSize;
    // Work range of full-basis indices; the margin keeps every banded product
    // entry we read exact despite truncation at the top.
    long K = 2 * N + 8;

    SymBanded x2;
    x2.size = K;
    x2.bands.resize(2);
    x2.bands[0].resize(K);
    x2.bands[1].resize(K - 2);
    Real halfInv = 1 / (2 * frequency);
    for (long n = 0; n < K; ++n)
        x2.bands[0][n] = (2 * n + 1) * halfInv;
    for (long n = 0; n + 2 < K; ++n)
        x2.bands[1][n] = sqrt(Real(n + 1) * (n + 2)) * halfInv;

    SymBanded x4 = multiply(x2, x2);
    SymBanded x6 = multiply(x4, x2);

    Real c2 = at_working_precision(potential.c2);
    Real c4 = at_working_precision(potential.c4);
    Real c6 = at_working_precision(potential.c6);

    HamiltonianBlock block;
    block.parity = parity;
    block.size = N;
    block.bandwidth = 3;
    block.entries.assign(N * N, Real(0));
    for (long i = 0; i < N; ++i) {
        long n = full_index(parity, i);
        for (long j = i; j <= std::min(N - 1, i + 3); ++j) {
            long m = full_index(parity, j);
            Real value = c2 * x2.at(m, n) + c4 * x4.at(m, n) + c6 * x6.at(m, n);
            if (j == i)
                value += frequency / 4 * (2 * n + 1);
            else if (j == i + 1)
                value -= frequency / 4 * sqrt(Real(n + 1) * (n + 2));
            block.at(i, j) = value;
            block.at(j, i) = value;
        }
    }
    return block;
}

}  // namespace detail

HamiltonianBlock build_hamiltonian(const TripleWellParams& params, const EigenSolveConfig& cfg,
                                   Parity parity) {
    auto scope = cfg.ctx.scope();
    Real w = at_working_precision(params.omega);
    if (!(w > 0))
        throw std::invalid_argument("build_hamiltonian: omega must be positive");
    detail::EvenPolynomialPotential pot{Real(w * w / 2), Real(-(w * w)), Real(w * w / 2)};
    return detail::build_polynomial_hamiltonian(pot, cfg, parity);
}

std::vector<Real> solve_lowest(const HamiltonianBlock& block, long k,
                               const EigenSolveConfig& cfg) {
    auto scope = cfg.ctx.scope();
    if (k < 0 || k > block.size)
        throw std::invalid_argument("solve_lowest: k must lie within the block size");
    if (k == 0)
        return {};

    long N = block.size;
    unsigned digits = cfg.ctx.digits;
    Real threshold = at_working_precision(cfg.offDiagonalThreshold);
    if (!(threshold > 0))
        threshold = pow(Real(10), 2 - static_cast<int>(digits));

    std::vector<Real> A;
    A.reserve(block.entries.size());
    for (const Real& x : block.entries)
        A.push_back(at_working_precision(x));

    // Entries this small relative to their diagonal neighbours cannot move the
    // spectrum at working precision; rotating on them is wasted work.
    Real negligible = pow(Real(10), -static_cast<long>(digits) - 10);
    constexpr int kMaxSweeps = 60;

    Real offNorm(0), diagNorm(0);
    Real scratchP = at_working_precision(Real(0));
    Real scratchQ = at_working_precision(Real(0));
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        offNorm = 0;
        diagNorm = 0;
        for (long p = 0; p < N; ++p) {
            diagNorm += A[p * N + p] * A[p * N + p];
            for (long q = p + 1; q < N; ++q)
                offNorm += A[p * N + q] * A[p * N + q];
        }
        offNorm = sqrt(offNorm);
        diagNorm = sqrt(diagNorm);
        if (offNorm <= threshold * diagNorm) {
            converged = true;
            break;
        }

        for (long p = 0; p < N - 1; ++p) {
            for (long q = p + 1; q < N; ++q) {
                Real apq = A[p * N + q];
                if (apq == 0)
                    continue;
                Real app = A[p * N + p];
                Real aqq = A[q * N + q];
                if (abs(apq) <= negligible * (abs(app) + abs(aqq)))
                    continue;

                Real theta = (aqq - app) / (2 * apq);
                Real t = 1 / (abs(theta) + sqrt(theta * theta + 1));
                if (theta < 0)
                    t = -t;
                Real c = 1 / sqrt(t * t + 1);
                Real s = t * c;

                // Rotate rows p and q with fused multiply kernels; the mirror
                // writes keep the full square consistent.
                for (long r = 0; r < N; ++r) {
                    if (r == p || r == q)
                        continue;
                    Real& arp = A[p * N + r];
                    Real& arq = A[q * N + r];
                    mpfr_fmms(scratchP.backend().data(), c.backend().data(),
                              arp.backend().data(), s.backend().data(), arq.backend().data(),
                              MPFR_RNDN);
                    mpfr_fmma(scratchQ.backend().data(), s.backend().data(),
                              arp.backend().data(), c.backend().data(), arq.backend().data(),
                              MPFR_RNDN);
                    mpfr_swap(arp.backend().data(), scratchP.backend().data());
                    mpfr_swap(arq.backend().data(), scratchQ.backend().data());
                    A[r * N + p] = arp;
                    A[r * N + q] = arq;
                }
                A[p * N + p] = app - t * apq;
                A[q * N + q] = aqq + t * apq;
                A[p * N + q] = 0;
                A[q * N + p] = 0;
            }
        }
    }
    if (!converged) {
        Real residual = diagNorm > 0 ? Real(offNorm / diagNorm) : offNorm;
        throw EigensolveFailureError("solve_lowest: Jacobi sweeps did not converge", residual);
    }

    std::vector<Real> levels;
    levels.reserve(N);
    for (long p = 0; p < N; ++p)
        levels.push_back(A[p * N + p]);
    std::sort(levels.begin(), levels.end());
    levels.resize(k);
    return levels;
}

namespace {

int agreement_digits(const Real& a, const Real& b, int cap) {
    Real diff = abs(a - b);
    if (diff == 0)
        return cap;
    Real scale = abs(a) > abs(b) ? abs(a) : abs(b);
    if (scale == 0)
        return cap;
    Real ratio = diff / scale;
    if (ratio >= 1)
        return 0;
    long d = floor(-log10(ratio)).convert_to<long>();
    return static_cast<int>(std::clamp<long>(d, 0, cap));
}

long initial_basis(const Real& omega) {
    double w = omega.convert_to<double>();
    return std::max<long>(40, static_cast<long>(std::ceil(1.2 * w)));
}

}  // namespace

std::pair<SpectrumTriplet, EigenResult> converged_spectrum(const TripleWellParams& params,
                                                           int targetDigits,
                                                           const PrecisionContext& ctx,
                                                           const EscalationLimits& limits) {
    if (targetDigits < 6)
        throw std::invalid_argument("converged_spectrum: targetDigits must be at least 6");

    // Precision floor: the doublet gap must stay resolvable inside the level
    // values, with guard digits on top.
    unsigned floorDigits = 10;
    {
        PrecisionContext probe = PrecisionContext::with_digits(40);
        auto scope = probe.scope();
        auto gaps = energy_differences(instanton_spectrum(params, probe));
        Real ratio = gaps.delta21 / at_working_precision(params.omega);
        if (ratio > 0 && ratio < 1)
            floorDigits = static_cast<unsigned>((-log10(ratio)).convert_to<long>() + 11);
    }
    unsigned digits =
        std::max({ctx.digits, static_cast<unsigned>(targetDigits + 10), floorDigits});
    long basis = initial_basis(params.omega);

    std::map<std::pair<long, unsigned>, std::array<Real, 3>> cache;
    std::vector<EscalationStep> steps;
    auto solve_at = [&](long b, unsigned d) {
        auto key = std::make_pair(b, d);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
        PrecisionContext local = PrecisionContext::with_digits(d);
        auto scope = local.scope();
        EigenSolveConfig cfg;
        cfg.basisSize = b;
        cfg.basisFrequency = at_working_precision(params.omega);
        cfg.ctx = local;
        cfg.offDiagonalThreshold = pow(Real(10), 2 - static_cast<int>(d));
        cfg.targetDigits = std::min<int>(targetDigits, static_cast<int>(d) - 10);
        auto evenLevels = solve_lowest(build_hamiltonian(params, cfg, Parity::even), 2, cfg);
        auto oddLevels = solve_lowest(build_hamiltonian(params, cfg, Parity::odd), 1, cfg);
        std::array<Real, 3> out{evenLevels[0], oddLevels[0], evenLevels[1]};
        cache.emplace(key, out);
        steps.push_back({b, d});
        return out;
    };

    int bestStable = -1;
    std::array<Real, 3> bestLevels;
    while (true) {
        auto base = solve_at(basis, digits);
        if (bestStable < 0) {
            bestStable = 0;
            bestLevels = base;
        }
        long bigger = basis + (basis + 1) / 2;
        if (bigger > limits.maxBasisSize || digits + 20 > limits.maxDigits) {
            SpectrumTriplet triplet{bestLevels[0], bestLevels[1], bestLevels[2],
                                    SpectrumMethod::numeric};
            EigenResult detail{{bestLevels[0], bestLevels[1], bestLevels[2]},
                               std::max(bestStable, 0),
                               steps};
            throw EscalationBudgetError(
                "converged_spectrum: escalation limits reached before the target stabilized",
                triplet, detail);
        }
        auto withBasis = solve_at(bigger, digits);
        auto withDigits = solve_at(basis, digits + 20);

        int agreeBasis = static_cast<int>(digits);
        int agreePrecision = static_cast<int>(digits);
        for (int i = 0; i < 3; ++i) {
            agreeBasis =
                std::min(agreeBasis, agreement_digits(base[i], withBasis[i], digits));
            agreePrecision =
                std::min(agreePrecision, agreement_digits(base[i], withDigits[i], digits));
        }
        int stable = std::min(agreeBasis, agreePrecision);
        if (stable > bestStable) {
            bestStable = stable;
            bestLevels = withBasis;
        }
        if (agreeBasis >= targetDigits && agreePrecision >= targetDigits) {
            SpectrumTriplet triplet{withBasis[0], withBasis[1], withBasis[2],
                                    SpectrumMethod::numeric};
            EigenResult detail{{withBasis[0], withBasis[1], withBasis[2]}, stable, steps};
            return {triplet, detail};
        }
        if (agreeBasis < targetDigits)
            basis = bigger;
        if (agreePrecision < targetDigits)
            digits += 20;
    }
}

}  // namespace triplewell
