#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbd/lp.hpp"
#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

/// Hard cap on the total number of measurements; the coupling LP has one
/// variable per global assignment, i.e. 2^total of them.
inline constexpr std::size_t kMaxTotalMeasurements = 20;

/// One measurement site a_i^j, addressed by position in the global bit
/// order: contexts in declared order, contents within a context in its
/// measured order. Bit 0 is the most significant bit of an assignment
/// index, so assignment indices run in lexicographic order with +1 < -1.
struct Site {
    std::size_t context;   // index into System::contexts
    std::size_t position;  // index into that context's measured list
    std::size_t bit;       // global bit position
};

/// Two same-content sites whose agreement the objective rewards, with the
/// largest agreement probability any coupling of their marginals allows.
struct ConnectionPair {
    std::string content;
    Site a;
    Site b;
    Rational max_equality;
};

/// The coupling polytope of a system in equality form: one nonnegative
/// variable per global assignment, one row per (context, outcome tuple)
/// pinning the context marginal, objective = total agreement over
/// connection pairs.
struct CouplingLP {
    std::size_t total_measurements = 0;
    std::vector<std::size_t> context_offset;  // first bit of each context
    std::vector<ConnectionPair> pairs;
    std::vector<std::string> row_label;  // "c:++" marginal, "q:c=c'" pinned
    lp::Problem problem;
};

/// A joint PMF over all measurement sites, sparse over assignment indices.
struct Coupling {
    std::size_t total_measurements = 0;
    std::map<std::uint64_t, Rational> atoms;  // index -> probability > 0
};

/// Outcome of the contextuality decision. delta = max_total - attained_total
/// is the shortfall of the best coupling against the per-pair maxima; the
/// system is contextual exactly when delta > 0. witness is a coupling
/// attaining max_total and is present exactly when noncontextual.
struct AnalysisResult {
    bool contextual = false;
    Rational delta;
    Rational max_total;
    Rational attained_total;
    std::optional<Coupling> witness;
};

/// Exact refutation of the constraint rows over x >= 0: scaling row i by
/// coefficient[i] (equalities may be scaled by either sign) and adding
/// gives a row with no positive entry whose right-hand side is positive.
struct FarkasCertificate {
    std::vector<std::string> row_label;
    std::vector<Rational> coefficient;
};

struct PerfectCouplingResult {
    bool feasible = false;
    std::optional<Coupling> witness;            // when feasible
    std::optional<FarkasCertificate> certificate;  // when infeasible
};

/// Builds the coupling polytope LP. Throws SizeGuardError past
/// kMaxTotalMeasurements and Error if the system has validation violations.
CouplingLP build_lp(const System& system);

/// build_lp plus one row per connection pair forcing agreement with
/// probability 1; objective zero (pure feasibility).
CouplingLP build_perfect_lp(const System& system);

/// Maximizes total agreement over all couplings and compares against the
/// sum of pairwise maxima. Deterministic: same system, same witness.
AnalysisResult decide_contextuality(const System& system);

/// Decides whether a coupling with all connection pairs almost surely equal
/// exists; returns it, or an exact infeasibility certificate (verified
/// against the LP before being returned).
PerfectCouplingResult check_perfect_coupling(const System& system);

/// Checks a certificate against the LP it claims to refute.
bool verify_certificate(const CouplingLP& lp, const FarkasCertificate& certificate);

/// Joint distribution over single-indexed contents, produced by collapsing
/// each connection of an everywhere-agreeing coupling to one coordinate.
struct ReducedCoupling {
    std::vector<std::string> contents;  // measured contents, declared order
    std::map<OutcomeTuple, Rational> pmf;
};

/// Collapses a perfect coupling to a joint PMF over the measured contents.
/// Throws ReductionError when the coupling does not reproduce the system's
/// context PMFs or some connection pair agrees with probability < 1.
ReducedCoupling reduce_coupling(const System& system, const Coupling& witness);

/// Distribution of the given global bit positions under a coupling.
ContextPMF coupling_marginal(const Coupling& coupling, const std::vector<std::size_t>& bits);

/// Renders an assignment index as per-context outcome groups, "++|-+|--".
std::string assignment_string(const System& system, std::uint64_t index);

}  // namespace cbd
