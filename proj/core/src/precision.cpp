#include "triplewell/precision.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace triplewell {

Real pi_value() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

Real binomial_real(unsigned long n, unsigned long k) {
    boost::multiprecision::mpz_int b;
    mpz_bin_uiui(b.backend().data(), n, k);
    return Real(b);
}

std::string decimal_string(const Real& x, unsigned digits) {
    return x.str(digits);
}

PrecisionContext PrecisionContext::with_digits(unsigned digits) {
    PrecisionContext ctx;
    ctx.digits = digits;
    double tol = digits > 20 ? std::pow(10.0, -static_cast<double>(digits - 20)) : 1e-10;
    ctx.quadTolerance = std::max(tol, 1e-300);
    ctx.seriesTolerance = ctx.quadTolerance;
    return ctx;
}

PrecisionContext PrecisionContext::from_environment() {
    if (const char* env = std::getenv("TRIPLEWELL_DIGITS")) {
        char* end = nullptr;
        unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0)
            return with_digits(static_cast<unsigned>(parsed < 30 ? 30 : parsed));
    }
    return PrecisionContext{};
}

void PrecisionContext::validate() const {
    if (digits < 30)
        throw std::invalid_argument("PrecisionContext: digits must be at least 30");
    if (!(quadTolerance > 0.0) || !(quadTolerance < 1.0))
        throw std::invalid_argument("PrecisionContext: quadTolerance must lie in (0, 1)");
    if (!(seriesTolerance > 0.0) || !(seriesTolerance < 1.0))
        throw std::invalid_argument("PrecisionContext: seriesTolerance must lie in (0, 1)");
}

namespace {

constexpr int kGaussPoints = 24;
constexpr int kMaxPanelDepth = 64;

// Nodes and weights of the Gauss-Legendre rule on [-1, 1], stored as the
// positive half (the rule is symmetric and kGaussPoints is even).
struct GaussRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

GaussRule compute_gauss_rule(unsigned digits) {
    ScopedPrecision scope(digits + 10);
    const int n = kGaussPoints;
    GaussRule rule;
    Real pi = pi_value();
    Real newtonTol = pow(Real(10), -static_cast<long>(digits) - 5);
    for (int k = 1; k <= n / 2; ++k) {
        // Chebyshev-like seed, then Newton on P_n via the three-term recurrence.
        Real x = cos(pi * (Real(4 * k - 1) / (4 * n + 2)));
        Real dp;
        for (int iter = 0; iter < 200; ++iter) {
            Real pPrev(1), p(x);
            for (int j = 2; j <= n; ++j) {
                Real pNext = ((2 * j - 1) * x * p - (j - 1) * pPrev) / j;
                pPrev = p;
                p = pNext;
            }
            dp = n * (x * p - pPrev) / (x * x - 1);
            Real dx = p / dp;
            x -= dx;
            if (abs(dx) < newtonTol * abs(x))
                break;
        }
        Real w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

const GaussRule& gauss_rule(unsigned digits) {
    static std::mutex mutex;
    static std::map<unsigned, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(digits);
    if (it == cache.end())
        it = cache.emplace(digits, compute_gauss_rule(digits)).first;
    return it->second;
}

struct PanelEstimate {
    Real integral;
    Real absIntegral;  // quadrature of |f|, used only to set the error scale
};

PanelEstimate gauss_panel(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                          const GaussRule& rule) {
    Real half = (b - a) / 2;
    Real mid = (a + b) / 2;
    PanelEstimate est{Real(0), Real(0)};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        Real offset = half * rule.nodes[i];
        Real lo = f(mid - offset);
        Real hi = f(mid + offset);
        est.integral += rule.weights[i] * (lo + hi);
        est.absIntegral += rule.weights[i] * (abs(lo) + abs(hi));
    }
    est.integral *= half;
    est.absIntegral *= half;
    return est;
}

Real refine_panel(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                  const Real& parent, const GaussRule& rule, const Real& budgetPerWidth,
                  int depth) {
    if (depth > kMaxPanelDepth)
        throw QuadratureError("adaptive quadrature: panel subdivision depth exhausted", a, b);
    Real mid = (a + b) / 2;
    Real left = gauss_panel(f, a, mid, rule).integral;
    Real right = gauss_panel(f, mid, b, rule).integral;
    Real sum = left + right;
    if (abs(sum - parent) <= budgetPerWidth * (b - a))
        return sum;
    return refine_panel(f, a, mid, left, rule, budgetPerWidth, depth + 1) +
           refine_panel(f, mid, b, right, rule, budgetPerWidth, depth + 1);
}

}  // namespace

Real integrate_adaptive(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
                        const PrecisionContext& ctx) {
    auto scope = ctx.scope();
    Real lower = at_working_precision(a);
    Real upper = at_working_precision(b);
    if (lower > upper)
        throw std::invalid_argument("integrate_adaptive: requires a <= b");
    if (lower == upper)
        return Real(0);
    const GaussRule& rule = gauss_rule(ctx.digits);
    PanelEstimate whole = gauss_panel(f, lower, upper, rule);
    // Error budget is relative to the integral's scale; the |f| quadrature
    // keeps the scale honest when cancellation drives the estimate toward 0.
    Real scale = abs(whole.integral);
    if (whole.absIntegral > scale)
        scale = whole.absIntegral;
    Real floor = pow(Real(10), -static_cast<long>(ctx.digits));
    if (scale < floor)
        scale = floor;
    Real budgetPerWidth = Real(ctx.quadTolerance) * scale / (upper - lower);
    return refine_panel(f, lower, upper, whole.integral, rule, budgetPerWidth, 0);
}

SeriesSum sum_series(const std::function<Real(long)>& term, const PrecisionContext& ctx,
                     long maxTerms) {
    auto scope = ctx.scope();
    if (maxTerms < 1)
        throw std::invalid_argument("sum_series: maxTerms must be positive");
    SeriesSum out;
    Real tol(ctx.seriesTolerance);
    Real floor = pow(Real(10), -2 * static_cast<long>(ctx.digits));
    int consecutiveSmall = 0;
    for (long i = 0; i < maxTerms; ++i) {
        Real t = term(i);
        out.value += t;
        out.lastTermMagnitude = abs(t);
        out.termsUsed = i + 1;
        Real scale = abs(out.value);
        if (scale < floor)
            scale = floor;
        if (out.lastTermMagnitude <= tol * scale) {
            if (++consecutiveSmall >= 2) {
                out.converged = true;
                break;
            }
        } else {
            consecutiveSmall = 0;
        }
    }
    return out;
}

}  // namespace triplewell
