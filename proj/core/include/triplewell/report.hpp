#pragma once

#include "triplewell/precision.hpp"
#include "triplewell/real.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace triplewell {

enum class OutputFormat { text, csv, json };

enum class ReportMethod { instanton, numeric, both };

struct ReportColumn {
    std::string label;
    std::string value;   // full-precision decimal string
    std::string method;  // "instanton", "numeric", or empty
};

struct ReportRow {
    Real omega;
    std::vector<ReportColumn> columns;
};

struct VerificationCheck {
    std::string description;
    bool passed = false;
    Real measuredError;
    Real tolerance;
};

struct VerificationOutcome {
    std::string suiteName;
    std::vector<VerificationCheck> checks;
    bool passed() const;
};

struct SpectrumRequest {
    Real omega;
    ReportMethod method = ReportMethod::instanton;
    int targetDigits = 20;
    long basisOverride = 0;  // 0 = automatic escalation
};

// Levels and splittings for one frequency.
ReportRow cmd_spectrum(const SpectrumRequest& request, const PrecisionContext& ctx);

// The two benchmark tables over omega in {30, 50, 70, 90, 110}: which=1 gives
// the splittings (numeric and closed-form), which=2 the numeric levels.
std::vector<ReportRow> cmd_table(int which, const PrecisionContext& ctx);

// Named oracle suites: integrals | series | amplitudes | eom | action | all.
VerificationOutcome cmd_verify(const std::string& suite, const PrecisionContext& ctx,
                               int seriesTerms = 60);

// Plot-ready closed-form trend data on a linear omega grid.
std::vector<ReportRow> cmd_sweep(const Real& omegaMin, const Real& omegaMax, int steps,
                                 const PrecisionContext& ctx);

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, OutputFormat format);
void write_outcome(std::ostream& out, const VerificationOutcome& outcome, OutputFormat format);

}  // namespace triplewell
