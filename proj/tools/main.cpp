#include "triplewell/report.hpp"
#include "triplewell/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitVerificationFailure = 1;
constexpr int kExitSolverFailure = 2;
constexpr int kExitUsage = 64;

triplewell::OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return triplewell::OutputFormat::csv;
    if (name == "json") return triplewell::OutputFormat::json;
    return triplewell::OutputFormat::text;
}

// Decimal strings go through Real directly so --omega keeps every digit the
// user typed, not a double's rounding of it. Call under a precision scope.
triplewell::Real parse_positive(const std::string& text, const char* flag) {
    try {
        triplewell::Real value(text);
        if (value > 0) return value;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string(flag) + " must be a positive decimal number, got '" +
                                text + "'");
}

struct Options {
    std::string omega;
    std::string omegaMin;
    std::string omegaMax;
    std::string method = "instanton";
    std::string suite = "all";
    std::string format = "text";
    int digits = 0;  // 0 = environment / per-command default
    int which = 0;
    int steps = 0;
    int maxTerms = 60;
    long basis = 0;
};

triplewell::PrecisionContext working_context(int digitsFlag, unsigned extra = 0) {
    triplewell::PrecisionContext env = triplewell::PrecisionContext::from_environment();
    unsigned digits = env.digits;
    if (digitsFlag > 0)
        digits = std::max(30u, static_cast<unsigned>(digitsFlag) + extra);
    return triplewell::PrecisionContext::with_digits(std::max(digits, env.digits));
}

int run_spectrum(const Options& opt) {
    using namespace triplewell;
    const int target = opt.digits > 0 ? opt.digits : 20;
    // Ten guard digits between the requested output digits and the arithmetic.
    PrecisionContext ctx = working_context(opt.digits, 10);
    if (ctx.digits < static_cast<unsigned>(target) + 10)
        ctx = PrecisionContext::with_digits(static_cast<unsigned>(target) + 10);
    auto guard = ctx.scope();

    SpectrumRequest request;
    request.omega = parse_positive(opt.omega, "--omega");
    request.targetDigits = target;
    request.basisOverride = opt.basis;
    if (opt.method == "numeric")
        request.method = ReportMethod::numeric;
    else if (opt.method == "both")
        request.method = ReportMethod::both;
    if (request.method != ReportMethod::instanton)
        std::cerr << "solving variationally at " << ctx.digits << " working digits\n";
    std::vector<ReportRow> rows{cmd_spectrum(request, ctx)};
    write_rows(std::cout, rows, parse_format(opt.format));
    return 0;
}

int run_table(const Options& opt) {
    using namespace triplewell;
    PrecisionContext ctx = working_context(opt.digits);
    std::cerr << "regenerating table " << opt.which
              << " (five converged variational solves; expect around a minute)\n";
    write_rows(std::cout, cmd_table(opt.which, ctx), parse_format(opt.format));
    return 0;
}

int run_verify(const Options& opt) {
    using namespace triplewell;
    PrecisionContext ctx = working_context(opt.digits);
    VerificationOutcome outcome = cmd_verify(opt.suite, ctx, opt.maxTerms);
    write_outcome(std::cout, outcome, parse_format(opt.format));
    if (!outcome.passed()) {
        std::cerr << "verification failed in suite '" << outcome.suiteName << "'\n";
        return kExitVerificationFailure;
    }
    return 0;
}

int run_sweep(const Options& opt) {
    using namespace triplewell;
    PrecisionContext ctx = working_context(opt.digits);
    auto guard = ctx.scope();
    Real lower = parse_positive(opt.omegaMin, "--omega-min");
    Real upper = parse_positive(opt.omegaMax, "--omega-max");
    write_rows(std::cout, cmd_sweep(lower, upper, opt.steps, ctx), parse_format(opt.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Low-lying spectrum of the triple well omega^2/2 x^2(x^2-1)^2: dilute-gas closed forms, "
        "an arbitrary-precision variational solver, and the oracle suites tying them together"};
    app.require_subcommand(1);

    Options opt;
    auto addFormat = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"text", "csv", "json"}));
    };
    auto addDigits = [&](CLI::App* sub, const char* help) {
        sub->add_option("--digits", opt.digits, help)->check(CLI::Range(6, 500));
    };

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "Lowest three levels and splittings at one frequency");
    spectrum->add_option("--omega", opt.omega, "Well parameter omega (positive decimal)")
        ->required();
    spectrum->add_option("--method", opt.method, "instanton, numeric, or both")
        ->check(CLI::IsMember({"instanton", "numeric", "both"}));
    addDigits(spectrum, "Stable digits to converge (numeric) and minimum digits emitted");
    spectrum->add_option("--basis", opt.basis,
                         "Fixed basis size per parity block (numeric; skips escalation)")
        ->check(CLI::Range(20, 5000));
    addFormat(spectrum);

    CLI::App* table = app.add_subcommand(
        "table", "Regenerate a benchmark table over omega in {30, 50, 70, 90, 110}");
    table->add_option("--which", opt.which, "1 = splittings, 2 = levels")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    addDigits(table, "Raise the per-row working precision floor");
    addFormat(table);

    CLI::App* verify = app.add_subcommand("verify", "Run the cross-validation oracle suites");
    verify->add_option("--suite", opt.suite,
                       "integrals, series, amplitudes, eom, action, or all");
    verify->add_option("--max-terms", opt.maxTerms, "Partial-sum length for the series suite")
        ->check(CLI::Range(2, 100000));
    addDigits(verify, "Working precision for the suites");
    addFormat(verify);

    CLI::App* sweep =
        app.add_subcommand("sweep", "Closed-form trend data on a linear omega grid");
    sweep->add_option("--omega-min", opt.omegaMin, "Lower end of the grid")->required();
    sweep->add_option("--omega-max", opt.omegaMax, "Upper end of the grid")->required();
    sweep->add_option("--steps", opt.steps, "Number of grid points")
        ->required()
        ->check(CLI::Range(2, 100000));
    addDigits(sweep, "Working precision for the grid");
    addFormat(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the parse diagnostic
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(opt);
        if (table->parsed()) return run_table(opt);
        if (verify->parsed()) return run_verify(opt);
        return run_sweep(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const triplewell::EscalationBudgetError& e) {
        const triplewell::SpectrumTriplet& best = e.best();
        std::cerr << "solver failure: " << e.what() << "\n"
                  << "best attempt (stable to " << e.detail().stableDigits << " digits):\n"
                  << "  e0 = " << triplewell::decimal_string(best.e0) << "\n"
                  << "  e1 = " << triplewell::decimal_string(best.e1) << "\n"
                  << "  e2 = " << triplewell::decimal_string(best.e2) << "\n";
        return kExitSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}
