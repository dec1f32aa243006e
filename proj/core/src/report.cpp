#include "triplewell/report.hpp"

#include "triplewell/dilute_gas.hpp"
#include "triplewell/potential.hpp"
#include "triplewell/solver.hpp"
#include "triplewell/spectrum.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace triplewell {
namespace {

Real power_of_ten(int k) { return pow(Real(10), k); }

Real relative_error(const Real& got, const Real& want) {
    return Real(abs(got - want) / abs(want));
}

// Check whose error must stay below the tolerance.
VerificationCheck bounded_check(std::string description, Real error, Real tolerance) {
    VerificationCheck check;
    check.description = std::move(description);
    check.measuredError = std::move(error);
    check.tolerance = std::move(tolerance);
    check.passed = check.measuredError <= check.tolerance;
    return check;
}

// Check for a deliberately wrong variant: it passes only when the measured
// deviation clears the floor, proving the comparison can tell the forms apart.
VerificationCheck exceeds_check(std::string description, Real deviation, Real floor) {
    VerificationCheck check;
    check.description = std::move(description);
    check.measuredError = std::move(deviation);
    check.tolerance = std::move(floor);
    check.passed = check.measuredError > check.tolerance;
    return check;
}

std::string method_name(SpectrumMethod method) {
    return method == SpectrumMethod::instanton ? "instanton" : "numeric";
}

void append_triplet(ReportRow& row, const SpectrumTriplet& triplet, const std::string& suffix) {
    const std::string tag = method_name(triplet.method);
    SplittingPair diff = energy_differences(triplet);
    row.columns.push_back({"e0" + suffix, decimal_string(triplet.e0), tag});
    row.columns.push_back({"e1" + suffix, decimal_string(triplet.e1), tag});
    row.columns.push_back({"e2" + suffix, decimal_string(triplet.e2), tag});
    row.columns.push_back({"delta10" + suffix, decimal_string(diff.delta10), tag});
    row.columns.push_back({"delta21" + suffix, decimal_string(diff.delta21), tag});
}

constexpr std::array<int, 5> kTableOmegas{30, 50, 70, 90, 110};

// Working precision and stable-digit target per benchmark row, sized so the
// smallest splitting of the row survives the subtraction of two O(omega)
// levels. Precomputed to keep table regeneration free of escalation churn.
struct TableBudget {
    unsigned digits;
    int targetDigits;
};

TableBudget table_budget(int omega) {
    switch (omega) {
        case 30: return {30, 20};
        case 50: return {34, 22};
        case 70: return {38, 25};
        case 90: return {42, 29};
        case 110: return {45, 30};
        default: throw std::logic_error("table_budget: unsupported omega");
    }
}

// ---------------------------------------------------------------------------
// Verification suites. Each returns granular checks; a failing check is data,
// not an error, so callers can report and aggregate.

void integrals_suite(std::vector<VerificationCheck>& checks, const PrecisionContext& ctx) {
    const Real tolerance = power_of_ten(-25);
    for (int w : {1, 30}) {
        TripleWellParams params{Real(w)};
        WellFrequencies wells = well_frequencies(params);
        InstantonPrefactors pre = instanton_prefactors(params);
        for (const char* span : {"0.1", "0.5", "1.0"}) {
            Real T(span);
            Real worstRecursive{0};
            Real worstOracle{0};
            for (long n = 0; n <= 4; ++n) {
                for (long m = 0; n + m <= 4; ++m) {
                    Real closed =
                        basic_integral(n, m, T, wells, pre, IntegralMethod::closedForm, ctx).value;
                    Real recursive =
                        basic_integral(n, m, T, wells, pre, IntegralMethod::recursive, ctx).value;
                    Real oracle =
                        basic_integral(n, m, T, wells, pre, IntegralMethod::quadratureOracle, ctx)
                            .value;
                    worstRecursive = max(worstRecursive, relative_error(recursive, closed));
                    worstOracle = max(worstOracle, relative_error(oracle, closed));
                }
            }
            std::string where = "omega=" + std::to_string(w) + ", T=" + span + ", all n+m<=4";
            checks.push_back(bounded_check("I(n,m;T) closed form vs recursion, " + where,
                                           worstRecursive, tolerance));
            checks.push_back(bounded_check("I(n,m;T) closed form vs nested quadrature, " + where,
                                           worstOracle, tolerance));
        }
    }
}

void series_suite(std::vector<VerificationCheck>& checks, const PrecisionContext& ctx,
                  int seriesTerms) {
    if (seriesTerms < 2)
        throw std::invalid_argument("verify: need at least two series terms");
    const Real tolerance = power_of_ten(-20);
    const Real u("0.1");
    const Real q = sqrt(1 + 4 * u * u);

    auto partialSum = [&](const std::function<Real(long)>& term) {
        Real sum{0};
        for (long j = 0; j < seriesTerms; ++j) sum += term(j);
        return sum;
    };

    // The four defining series, summed directly rather than through the
    // sequence builder, against their resummed closed forms.
    Real a0Sum = partialSum([&](long j) {
        Real t = binomial_real(2 * j, j) * pow(u, static_cast<unsigned>(2 * j + 1));
        return j % 2 == 0 ? t : Real(-t);
    });
    checks.push_back(bounded_check("a0+ partial sum vs u/q, u=0.1",
                                   relative_error(a0Sum, u / q), tolerance));

    Real a1Sum = partialSum([&](long j) {
        Real t = binomial_real(2 * j + 1, j + 1) * pow(u, static_cast<unsigned>(2 * j + 2));
        return j % 2 == 0 ? t : Real(-t);
    });
    Real halfGapWeight = (1 - 1 / q) / 2;
    checks.push_back(bounded_check("a1+ partial sum vs (1-1/q)/2, u=0.1",
                                   relative_error(a1Sum, halfGapWeight), tolerance));

    // Lambda0+ through the central-binomial expansion of its generating
    // function; the closed form must use the (2B/delta)^2 radicand.
    Real lambda0Sum = partialSum([&](long j) {
        if (j == 0) return Real(0);
        Real t = binomial_real(2 * j, j) * pow(u, static_cast<unsigned>(2 * j)) / 2;
        return j % 2 == 0 ? Real(-t) : t;
    });
    checks.push_back(bounded_check(
        "lambda0+ partial sum vs (1-1/q)/2 with q=sqrt(1+(2B/delta)^2), u=0.1",
        relative_error(lambda0Sum, halfGapWeight), tolerance));

    Real qInverted = sqrt(1 + 1 / (4 * u * u));
    checks.push_back(exceeds_check(
        "lambda0+ inverted radicand q=sqrt(1+(delta/2B)^2) is rejected (must exceed tolerance)",
        relative_error(lambda0Sum, (1 - 1 / qInverted) / 2), 10 * tolerance));

    Real lambda1Sum = partialSum([&](long j) {
        Real t = binomial_real(2 * j + 2, j + 2) * pow(u, static_cast<unsigned>(2 * j + 3));
        return j % 2 == 0 ? t : Real(-t);
    });
    Real lambda1Closed = 4 * pow(u, 3u) / (q * (1 + q) * (1 + q));
    checks.push_back(bounded_check("lambda1+ partial sum vs 4u^3/(q(1+q)^2), u=0.1",
                                   relative_error(lambda1Sum, lambda1Closed), tolerance));

    // Tie the library's sequence seeds to the same sums.
    WellFrequencies wells{Real(1), Real(2), Real("0.5")};
    InstantonPrefactors pre;
    pre.action = Real("0.25");
    pre.fluctuationFactor = exp(-pre.action);
    pre.couplingB = u * wells.delta;
    pre.matchingFactor = pre.couplingB / (sqrt(Real(2)) * pre.fluctuationFactor);
    pre.normalization = sqrt(wells.omega0 / (2 * pi_value()));
    CoefficientSequence aPlus = coefficient_sequence(SequenceKind::aPlus, 2, wells, pre, ctx);
    Real seedError =
        max(relative_error(aPlus.values[0], a0Sum), relative_error(aPlus.values[1], a1Sum));
    checks.push_back(bounded_check("sequence seeds vs independent partial sums, u=0.1", seedError,
                                   power_of_ten(-35)));
}

void amplitudes_suite(std::vector<VerificationCheck>& checks, const PrecisionContext& ctx) {
    const Real tolerance = power_of_ten(-12);

    // 0->1 chain sums pair the outer levels (E0, E2). The variant pairing
    // (E0, E1) must be visibly wrong at finite T.
    {
        TripleWellParams params{Real(30)};
        WellFrequencies wells = well_frequencies(params);
        InstantonPrefactors pre = instanton_prefactors(params);
        Real T("0.3");
        AmplitudeDecomposition truncated =
            amplitude_0_to_1(T, wells, pre, AmplitudeMethod::truncatedSum, ctx, 24);
        AmplitudeDecomposition closed =
            amplitude_0_to_1(T, wells, pre, AmplitudeMethod::closedForm, ctx);
        checks.push_back(bounded_check(
            "0->1 truncated chain sum (maxI=24) vs closed form, omega=30, T=0.3",
            relative_error(truncated.value, closed.value), tolerance));
        Real middlePaired = closed.prefactor * (closed.weights[0] * exp(-closed.energies[0] * T) +
                                                closed.weights[2] * exp(-closed.energies[1] * T));
        checks.push_back(exceeds_check(
            "0->1 variant pairing (E0,E1) is rejected (must exceed tolerance)",
            relative_error(truncated.value, middlePaired), power_of_ten(-6)));
    }

    // 1->1: non-negative spectral weights and truncated-vs-closed agreement.
    for (int w : {1, 30}) {
        TripleWellParams params{Real(w)};
        WellFrequencies wells = well_frequencies(params);
        InstantonPrefactors pre = instanton_prefactors(params);
        AmplitudeDecomposition shape =
            amplitude_1_to_1(Real(1), wells, pre, AmplitudeMethod::closedForm, ctx);
        Real smallest = std::min({shape.weights[0], shape.weights[1], shape.weights[2]});
        checks.push_back(bounded_check(
            "1->1 spectral weights non-negative, omega=" + std::to_string(w),
            smallest < 0 ? Real(-smallest) : Real(0), Real(0)));
        for (const char* span : {"0.1", "0.5"}) {
            Real T(span);
            AmplitudeDecomposition truncated =
                amplitude_1_to_1(T, wells, pre, AmplitudeMethod::truncatedSum, ctx, 24);
            AmplitudeDecomposition closed =
                amplitude_1_to_1(T, wells, pre, AmplitudeMethod::closedForm, ctx);
            checks.push_back(bounded_check("1->1 truncated sum vs closed form, omega=" +
                                               std::to_string(w) + ", T=" + span,
                                           relative_error(truncated.value, closed.value),
                                           tolerance));
        }
    }
}

void eom_suite(std::vector<VerificationCheck>& checks, const PrecisionContext& ctx) {
    auto guard = ctx.scope();
    TripleWellParams params{Real(2)};
    const std::array<const char*, 4> times{"-0.9", "-0.25", "0.25", "0.9"};
    const std::array<std::pair<ProfileKind, const char*>, 4> kinds{{
        {ProfileKind::instantonRight, "instanton right"},
        {ProfileKind::instantonLeft, "instanton left"},
        {ProfileKind::antiInstantonRight, "anti-instanton right"},
        {ProfileKind::antiInstantonLeft, "anti-instanton left"},
    }};
    for (auto [kind, label] : kinds) {
        InstantonProfile profile{kind, Real(0)};
        // L1 residual of the second-difference Euclidean EOM over the sample
        // times, on a halving ladder of steps.
        auto residual = [&](int k) {
            Real h = pow(Real(2), -k);
            Real sum{0};
            for (const char* ts : times) {
                Real t(ts);
                Real x0 = instanton_profile(params, profile, t);
                Real fd2 = (instanton_profile(params, profile, t + h) - 2 * x0 +
                            instanton_profile(params, profile, t - h)) /
                           (h * h);
                sum += abs(fd2 - eval_potential(params, x0, 1));
            }
            return sum;
        };
        Real coarse = residual(8);
        Real mid = residual(9);
        Real fine = residual(10);
        Real order = log(mid / fine) / log(Real(2));
        // The dyadic order estimate carries an O(h^2) correction of its own
        // (measured ~1e-4 at this ladder), hence the 1e-3 margin below 2.
        checks.push_back(exceeds_check(std::string("EOM h-refinement order, ") + label +
                                           " (must exceed tolerance)",
                                       order, Real("1.999")));
        // And the scheme must actually be contracting: four-fold per halving.
        checks.push_back(bounded_check(std::string("EOM residual contraction, ") + label,
                                       relative_error(coarse / fine, Real(16)), Real("0.01")));
    }
}

void action_suite(std::vector<VerificationCheck>& checks, const PrecisionContext& ctx) {
    const Real tolerance = power_of_ten(-40);
    for (int w : {1, 30, 90}) {
        TripleWellParams params{Real(w)};
        Real quadrature = classical_action(params, ActionMethod::quadrature, ctx);
        Real closed = classical_action(params, ActionMethod::analytic, ctx);
        checks.push_back(bounded_check("barrier action quadrature vs omega/4, omega=" +
                                           std::to_string(w),
                                       relative_error(quadrature, closed), tolerance));
    }
}

// ---------------------------------------------------------------------------
// Emission helpers.

void write_rows_text(std::ostream& out, const std::vector<ReportRow>& rows) {
    for (const ReportRow& row : rows) {
        out << "omega = " << decimal_string(row.omega) << "\n";
        for (const ReportColumn& column : row.columns) {
            out << "  " << column.label;
            if (!column.method.empty()) out << " [" << column.method << "]";
            out << " = " << column.value << "\n";
        }
    }
}

void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    if (rows.empty()) return;
    out << "omega";
    for (const ReportColumn& column : rows.front().columns) out << "," << column.label;
    out << "\n";
    for (const ReportRow& row : rows) {
        out << decimal_string(row.omega);
        for (const ReportColumn& column : row.columns) out << "," << column.value;
        out << "\n";
    }
}

void write_rows_json(std::ostream& out, const std::vector<ReportRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ReportRow& row : rows) {
        nlohmann::json columns = nlohmann::json::array();
        for (const ReportColumn& column : row.columns)
            columns.push_back({{"label", column.label},
                               {"value", column.value},
                               {"method", column.method}});
        doc.push_back({{"omega", decimal_string(row.omega)}, {"columns", std::move(columns)}});
    }
    out << doc.dump(2) << "\n";
}

void write_outcome_text(std::ostream& out, const VerificationOutcome& outcome) {
    std::size_t passed = 0;
    for (const VerificationCheck& check : outcome.checks) passed += check.passed ? 1 : 0;
    out << "suite " << outcome.suiteName << ": " << (outcome.passed() ? "PASS" : "FAIL") << " ("
        << passed << "/" << outcome.checks.size() << " checks)\n";
    for (const VerificationCheck& check : outcome.checks) {
        out << "  [" << (check.passed ? "PASS" : "FAIL") << "] " << check.description
            << " | measured " << decimal_string(check.measuredError, 6) << " | tolerance "
            << decimal_string(check.tolerance, 6) << "\n";
    }
}

void write_outcome_csv(std::ostream& out, const VerificationOutcome& outcome) {
    out << "suite,check,passed,measured,tolerance\n";
    for (const VerificationCheck& check : outcome.checks) {
        std::string description = check.description;
        std::replace(description.begin(), description.end(), ',', ';');
        out << outcome.suiteName << "," << description << "," << (check.passed ? "1" : "0") << ","
            << decimal_string(check.measuredError, 6) << "," << decimal_string(check.tolerance, 6)
            << "\n";
    }
}

void write_outcome_json(std::ostream& out, const VerificationOutcome& outcome) {
    nlohmann::json checks = nlohmann::json::array();
    for (const VerificationCheck& check : outcome.checks)
        checks.push_back({{"description", check.description},
                          {"passed", check.passed},
                          {"measured", decimal_string(check.measuredError, 6)},
                          {"tolerance", decimal_string(check.tolerance, 6)}});
    nlohmann::json doc{{"suite", outcome.suiteName},
                       {"passed", outcome.passed()},
                       {"checks", std::move(checks)}};
    out << doc.dump(2) << "\n";
}

}  // namespace

bool VerificationOutcome::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerificationCheck& check) { return check.passed; });
}

ReportRow cmd_spectrum(const SpectrumRequest& request, const PrecisionContext& ctx) {
    auto guard = ctx.scope();
    if (!(request.omega > 0)) throw std::invalid_argument("spectrum: omega must be positive");
    if (request.basisOverride < 0)
        throw std::invalid_argument("spectrum: basis override must be positive");
    TripleWellParams params{at_working_precision(request.omega)};

    ReportRow row;
    row.omega = params.omega;
    const bool both = request.method == ReportMethod::both;
    if (request.method != ReportMethod::numeric)
        append_triplet(row, instanton_spectrum(params, ctx), both ? "_ins" : "");
    if (request.method != ReportMethod::instanton) {
        if (request.targetDigits < 6)
            throw std::invalid_argument("spectrum: need at least 6 target digits");
        SpectrumTriplet triplet;
        int stableDigits = 0;
        if (request.basisOverride > 0) {
            EigenSolveConfig cfg;
            cfg.basisSize = request.basisOverride;
            cfg.basisFrequency = params.omega;
            cfg.ctx = ctx;
            cfg.targetDigits = request.targetDigits;
            std::vector<Real> even =
                solve_lowest(build_hamiltonian(params, cfg, Parity::even), 2, cfg);
            std::vector<Real> odd =
                solve_lowest(build_hamiltonian(params, cfg, Parity::odd), 1, cfg);
            std::array<Real, 3> levels{even[0], odd[0], even[1]};
            std::sort(levels.begin(), levels.end());
            triplet = SpectrumTriplet{levels[0], levels[1], levels[2], SpectrumMethod::numeric};
        } else {
            auto [converged, detail] = converged_spectrum(params, request.targetDigits, ctx);
            triplet = converged;
            stableDigits = detail.stableDigits;
        }
        append_triplet(row, triplet, both ? "_num" : "");
        if (request.basisOverride == 0)
            row.columns.push_back(
                {"stable_digits", std::to_string(stableDigits), "numeric"});
    }
    return row;
}

std::vector<ReportRow> cmd_table(int which, const PrecisionContext& ctx) {
    if (which != 1 && which != 2)
        throw std::invalid_argument("table: which must be 1 (splittings) or 2 (levels)");
    std::vector<ReportRow> rows;
    rows.reserve(kTableOmegas.size());
    for (int w : kTableOmegas) {
        TableBudget budget = table_budget(w);
        PrecisionContext rowCtx =
            PrecisionContext::with_digits(std::max(ctx.digits, budget.digits));
        auto guard = rowCtx.scope();
        TripleWellParams params{Real(w)};
        ReportRow row;
        row.omega = params.omega;
        SpectrumTriplet numeric =
            converged_spectrum(params, budget.targetDigits, rowCtx).first;
        if (which == 1) {
            SplittingPair num = energy_differences(numeric);
            SplittingPair ins = energy_differences(instanton_spectrum(params, rowCtx));
            row.columns.push_back({"delta10_num", decimal_string(num.delta10), "numeric"});
            row.columns.push_back({"delta10_ins", decimal_string(ins.delta10), "instanton"});
            row.columns.push_back({"delta21_num", decimal_string(num.delta21), "numeric"});
            row.columns.push_back({"delta21_ins", decimal_string(ins.delta21), "instanton"});
        } else {
            row.columns.push_back({"e0", decimal_string(numeric.e0), "numeric"});
            row.columns.push_back({"e1", decimal_string(numeric.e1), "numeric"});
            row.columns.push_back({"e2", decimal_string(numeric.e2), "numeric"});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

VerificationOutcome cmd_verify(const std::string& suite, const PrecisionContext& ctx,
                               int seriesTerms) {
    auto guard = ctx.scope();
    VerificationOutcome outcome;
    outcome.suiteName = suite;
    bool known = false;
    if (suite == "integrals" || suite == "all") {
        integrals_suite(outcome.checks, ctx);
        known = true;
    }
    if (suite == "series" || suite == "all") {
        series_suite(outcome.checks, ctx, seriesTerms);
        known = true;
    }
    if (suite == "amplitudes" || suite == "all") {
        amplitudes_suite(outcome.checks, ctx);
        known = true;
    }
    if (suite == "eom" || suite == "all") {
        eom_suite(outcome.checks, ctx);
        known = true;
    }
    if (suite == "action" || suite == "all") {
        action_suite(outcome.checks, ctx);
        known = true;
    }
    if (!known)
        throw std::invalid_argument(
            "verify: unknown suite '" + suite +
            "' (expected integrals, series, amplitudes, eom, action, or all)");
    return outcome;
}

std::vector<ReportRow> cmd_sweep(const Real& omegaMin, const Real& omegaMax, int steps,
                                 const PrecisionContext& ctx) {
    auto guard = ctx.scope();
    if (!(omegaMin > 0)) throw std::invalid_argument("sweep: omega range must be positive");
    if (!(omegaMax > omegaMin))
        throw std::invalid_argument("sweep: omega range must be increasing");
    if (steps < 2) throw std::invalid_argument("sweep: need at least two steps");

    Real lower = at_working_precision(omegaMin);
    Real spacing = Real(at_working_precision(omegaMax) - lower) / (steps - 1);
    std::vector<ReportRow> rows;
    rows.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        TripleWellParams params{Real(lower + i * spacing)};
        SpectrumTriplet triplet = instanton_spectrum(params, ctx);
        ReportRow row;
        row.omega = params.omega;
        row.columns.push_back({"e0_over_omega", decimal_string(Real(triplet.e0 / params.omega)),
                               "instanton"});
        row.columns.push_back({"delta21_ins",
                               decimal_string(energy_differences(triplet).delta21), "instanton"});
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, OutputFormat format) {
    switch (format) {
        case OutputFormat::text: write_rows_text(out, rows); break;
        case OutputFormat::csv: write_rows_csv(out, rows); break;
        case OutputFormat::json: write_rows_json(out, rows); break;
    }
}

void write_outcome(std::ostream& out, const VerificationOutcome& outcome, OutputFormat format) {
    switch (format) {
        case OutputFormat::text: write_outcome_text(out, outcome); break;
        case OutputFormat::csv: write_outcome_csv(out, outcome); break;
        case OutputFormat::json: write_outcome_json(out, outcome); break;
    }
}

}  // namespace triplewell
