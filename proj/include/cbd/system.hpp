#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cbd/rational.hpp"

namespace cbd {

/// Measurement outcome, +1 or -1.
using Sign = std::int8_t;

/// A measured property (what is measured).
struct Content {
    std::string label;

    bool operator==(const Content&) const = default;
};

/// Conditions of measurement (how/when); lists which contents it measures,
/// in a fixed order that also orders outcome tuples.
struct Context {
    std::string label;
    std::vector<std::string> measured;

    bool operator==(const Context&) const = default;
};

/// Fixed-length tuple over {+1, -1}, one slot per measured content.
/// Ordered so that +1 sorts before -1, matching the lexicographic order of
/// the "+"/"-" outcome strings.
struct OutcomeTuple {
    std::vector<Sign> values;

    OutcomeTuple() = default;
    explicit OutcomeTuple(std::vector<Sign> v) : values(std::move(v)) {}

    /// Builds from a string over '+'/'-'; throws Error on any other character.
    static OutcomeTuple from_string(std::string_view text);

    /// The tuple with lexicographic rank `index` among all tuples of the
    /// given arity (rank 0 is all +1).
    static OutcomeTuple from_index(std::uint64_t index, std::size_t arity);

    std::size_t arity() const { return values.size(); }

    /// Lexicographic rank among tuples of this arity.
    std::uint64_t index() const;

    std::string str() const;

    bool operator==(const OutcomeTuple&) const = default;
    bool operator<(const OutcomeTuple& other) const;
};

/// Exact joint distribution of one context's measurements. Entries with
/// probability zero may be present or absent; all operations treat a missing
/// outcome as probability zero.
struct ContextPMF {
    std::map<OutcomeTuple, Rational> entries;

    Rational total() const;
    Rational probability(const OutcomeTuple& outcome) const;

    /// Semantic equality: same probability for every outcome.
    bool operator==(const ContextPMF& other) const;
};

/// Declaration part of a system: contents, contexts, and what each context
/// measures, without distributions.
struct SystemFormat {
    std::string name;
    std::vector<Content> contents;
    std::vector<Context> contexts;

    const Context* find_context(std::string_view label) const;
    bool has_content(std::string_view label) const;
};

/// A content-context system of +/-1 random variables: the format plus one
/// exact PMF per context. Immutable by convention after construction.
struct System {
    std::string name;
    std::vector<Content> contents;
    std::vector<Context> contexts;
    std::map<std::string, ContextPMF> pmfs;  // context label -> distribution

    SystemFormat format() const;
    const Context* find_context(std::string_view label) const;
    bool has_content(std::string_view label) const;

    bool operator==(const System& other) const;
};

enum class ViolationKind {
    DuplicateContentLabel,
    EmptyContentLabel,
    DuplicateContextLabel,
    EmptyMeasuredList,
    DuplicateMeasured,
    UnknownContent,
    MissingPmf,
    UnknownPmfContext,
    ArityMismatch,
    NegativeProbability,
    UnnormalizedPmf,
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every System invariant and reports violations as data; never throws.
ValidationReport validate(const System& system);

/// Exact marginal of a context's PMF over a subset of its contents, in the
/// order the subset is given. Throws Error on an unknown context or a subset
/// entry the context does not measure.
ContextPMF marginal(const System& system, std::string_view context,
                    const std::vector<std::string>& subset);

/// Pr[a = +1] for the measurement of `content` in `context`.
Rational success_probability(const System& system, std::string_view content,
                             std::string_view context);

/// Product expectation <ab> of two contents co-measured in a context.
Rational correlation(const System& system, std::string_view context,
                     std::string_view content_a, std::string_view content_b);

/// All measurements of one content across the contexts containing it.
struct Connection {
    std::string content;
    std::vector<std::string> sites;  // context labels, declared order

    bool operator==(const Connection&) const = default;
};

/// Connections derived from the system format, one per content that is
/// measured at least once, in declared content order.
std::vector<Connection> connections(const System& system);

struct ConsistencyReport {
    bool consistent = true;
    std::vector<Connection> violating;  // connections with unequal marginals
};

/// True iff within every connection all measurements are identically
/// distributed (exact rational comparison of single-content marginals).
ConsistencyReport is_consistently_connected(const System& system);

/// Maximum of Pr[X = Y] over all couplings of binary X, Y with
/// Pr[X=+1] = p and Pr[Y=+1] = q, namely 1 - |p - q|.
/// Throws Error when an argument is outside [0, 1].
Rational connection_max_equality(const Rational& p, const Rational& q);

struct TrialRecord {
    std::string context;
    OutcomeTuple outcome;
};

/// Builds a system whose PMFs are the exact empirical frequencies of the
/// records. Throws Error on an unknown context, an arity mismatch, or a
/// declared context with no records.
System ingest_trials(const SystemFormat& format, const std::vector<TrialRecord>& records);

}  // namespace cbd
