#pragma once

#include <optional>
#include <string>

#include "cbd/coupling.hpp"
#include "cbd/cyclic.hpp"
#include "cbd/lambda.hpp"
#include "cbd/system.hpp"

namespace cbd {

struct Timings {
    long long analyze_ms = 0;
    long long perfect_ms = 0;
    long long total_ms = 0;
};

/// Everything the analyze pipeline establishes about one system. All fields
/// are deterministic functions of the input except timings.
struct Report {
    System system;
    ValidationReport validation;  // always clean: analyze_system rejects invalid input
    ConsistencyReport consistency;
    std::optional<CyclicProfile> cyclic;
    Rational s_odd_value;  // meaningful when cyclic
    CyclicVerdict cyclic_verdict = CyclicVerdict::NotApplicable;
    AnalysisResult analysis;
    PerfectCouplingResult perfect;
    Timings timings;
};

/// Full pipeline: validation, consistency, cyclic recognition + criterion,
/// contextuality LP, perfect-coupling feasibility. Throws Error when the
/// system has validation violations, SizeGuardError past the cap.
Report analyze_system(const System& system);

/// Schema-stable JSON ("cbd.report/1"), rationals as "p/q" strings,
/// 2-space indentation, no trailing newline. Only timings_ms varies
/// between runs on identical input.
std::string report_to_json(const Report& report);

/// Human-readable rendering; witness atoms are listed only when
/// show_witness is set. Deterministic except the trailing timings line.
std::string report_to_text(const Report& report, bool show_witness);

/// Cyclic-profile rendering for the cyclic subcommand ("not cyclic" when
/// the profile is absent).
std::string cyclic_to_text(const Report& report);

std::string lambda_to_text(const LambdaModel& model);

}  // namespace cbd
