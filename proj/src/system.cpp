#include "cbd/system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cbd/errors.hpp"

namespace cbd {

OutcomeTuple OutcomeTuple::from_string(std::string_view text) {
    std::vector<Sign> values;
    values.reserve(text.size());
    for (char c : text) {
        if (c == '+') {
            values.push_back(+1);
        } else if (c == '-') {
            values.push_back(-1);
        } else {
            throw Error("outcome string must contain only '+' and '-'");
        }
    }
    return OutcomeTuple(std::move(values));
}

OutcomeTuple OutcomeTuple::from_index(std::uint64_t index, std::size_t arity) {
    std::vector<Sign> values(arity, +1);
    for (std::size_t i = 0; i < arity; ++i) {
        // Most significant bit first; bit set means -1 so that increasing
        // indices enumerate tuples lexicographically with +1 < -1.
        if (index >> (arity - 1 - i) & 1) values[i] = -1;
    }
    return OutcomeTuple(std::move(values));
}

std::uint64_t OutcomeTuple::index() const {
    std::uint64_t r = 0;
    for (Sign v : values) r = (r << 1) | (v < 0 ? 1u : 0u);
    return r;
}

std::string OutcomeTuple::str() const {
    std::string s;
    s.reserve(values.size());
    for (Sign v : values) s.push_back(v > 0 ? '+' : '-');
    return s;
}

bool OutcomeTuple::operator<(const OutcomeTuple& other) const {
    if (values.size() != other.values.size()) return values.size() < other.values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != other.values[i]) return values[i] > other.values[i];  // +1 first
    }
    return false;
}

Rational ContextPMF::total() const {
    Rational sum = 0;
    for (const auto& [outcome, p] : entries) sum += p;
    return sum;
}

Rational ContextPMF::probability(const OutcomeTuple& outcome) const {
    auto it = entries.find(outcome);
    return it == entries.end() ? Rational(0) : it->second;
}

bool ContextPMF::operator==(const ContextPMF& other) const {
    for (const auto& [outcome, p] : entries) {
        if (p != other.probability(outcome)) return false;
    }
    for (const auto& [outcome, p] : other.entries) {
        if (p != probability(outcome)) return false;
    }
    return true;
}

namespace {

template <typename T>
const Context* find_context_in(const T& contexts, std::string_view label) {
    for (const auto& c : contexts) {
        if (c.label == label) return &c;
    }
    return nullptr;
}

template <typename T>
bool has_content_in(const T& contents, std::string_view label) {
    return std::any_of(contents.begin(), contents.end(),
                       [&](const Content& c) { return c.label == label; });
}

}  // namespace

const Context* SystemFormat::find_context(std::string_view label) const {
    return find_context_in(contexts, label);
}

bool SystemFormat::has_content(std::string_view label) const {
    return has_content_in(contents, label);
}

SystemFormat System::format() const {
    return SystemFormat{name, contents, contexts};
}

const Context* System::find_context(std::string_view label) const {
    return find_context_in(contexts, label);
}

bool System::has_content(std::string_view label) const {
    return has_content_in(contents, label);
}

bool System::operator==(const System& other) const {
    return name == other.name && contents == other.contents &&
           contexts == other.contexts && pmfs == other.pmfs;
}

ValidationReport validate(const System& system) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::string message) {
        report.violations.push_back({kind, std::move(message)});
    };

    std::set<std::string> content_labels;
    for (const auto& content : system.contents) {
        if (content.label.empty()) add(ViolationKind::EmptyContentLabel, "empty content label");
        if (!content_labels.insert(content.label).second)
            add(ViolationKind::DuplicateContentLabel,
                "duplicate content label '" + content.label + "'");
    }

    std::set<std::string> context_labels;
    for (const auto& context : system.contexts) {
        if (!context_labels.insert(context.label).second)
            add(ViolationKind::DuplicateContextLabel,
                "duplicate context label '" + context.label + "'");
        if (context.measured.empty())
            add(ViolationKind::EmptyMeasuredList,
                "context '" + context.label + "' measures nothing");
        std::set<std::string> seen;
        for (const auto& m : context.measured) {
            if (!seen.insert(m).second)
                add(ViolationKind::DuplicateMeasured,
                    "context '" + context.label + "' measures '" + m + "' twice");
            if (!content_labels.count(m))
                add(ViolationKind::UnknownContent,
                    "context '" + context.label + "' measures unknown content '" + m + "'");
        }
    }

    for (const auto& context : system.contexts) {
        auto it = system.pmfs.find(context.label);
        if (it == system.pmfs.end()) {
            add(ViolationKind::MissingPmf, "context '" + context.label + "' has no PMF");
            continue;
        }
        const ContextPMF& pmf = it->second;
        bool arity_ok = true;
        for (const auto& [outcome, p] : pmf.entries) {
            if (outcome.arity() != context.measured.size()) {
                add(ViolationKind::ArityMismatch,
                    "context '" + context.label + "': outcome '" + outcome.str() +
                        "' has arity " + std::to_string(outcome.arity()) + ", expected " +
                        std::to_string(context.measured.size()));
                arity_ok = false;
            }
            if (p < 0)
                add(ViolationKind::NegativeProbability,
                    "context '" + context.label + "': outcome '" + outcome.str() +
                        "' has negative probability " + to_string(p));
        }
        if (arity_ok && pmf.total() != 1)
            add(ViolationKind::UnnormalizedPmf, "context '" + context.label +
                                                    "': PMF sums to " + to_string(pmf.total()) +
                                                    ", expected 1");
    }

    for (const auto& [label, pmf] : system.pmfs) {
        if (!system.find_context(label))
            add(ViolationKind::UnknownPmfContext, "PMF given for unknown context '" + label + "'");
    }

    return report;
}

ContextPMF marginal(const System& system, std::string_view context_label,
                    const std::vector<std::string>& subset) {
    const Context* context = system.find_context(context_label);
    if (!context) throw Error("unknown context '" + std::string(context_label) + "'");

    std::vector<std::size_t> positions;
    positions.reserve(subset.size());
    for (const auto& label : subset) {
        auto it = std::find(context->measured.begin(), context->measured.end(), label);
        if (it == context->measured.end())
            throw Error("content '" + label + "' is not measured in context '" +
                        context->label + "'");
        positions.push_back(static_cast<std::size_t>(it - context->measured.begin()));
    }

    auto pmf_it = system.pmfs.find(context->label);
    if (pmf_it == system.pmfs.end())
        throw Error("context '" + context->label + "' has no PMF");

    ContextPMF result;
    for (const auto& [outcome, p] : pmf_it->second.entries) {
        std::vector<Sign> projected;
        projected.reserve(positions.size());
        for (std::size_t pos : positions) {
            if (pos >= outcome.arity())
                throw Error("context '" + context->label + "' has a malformed PMF entry");
            projected.push_back(outcome.values[pos]);
        }
        result.entries[OutcomeTuple(std::move(projected))] += p;
    }
    return result;
}

Rational success_probability(const System& system, std::string_view content,
                             std::string_view context) {
    ContextPMF m = marginal(system, context, {std::string(content)});
    return m.probability(OutcomeTuple({+1}));
}

Rational correlation(const System& system, std::string_view context,
                     std::string_view content_a, std::string_view content_b) {
    ContextPMF m = marginal(system, context, {std::string(content_a), std::string(content_b)});
    Rational sum = 0;
    for (const auto& [outcome, p] : m.entries) {
        sum += Rational(outcome.values[0] * outcome.values[1]) * p;
    }
    return sum;
}

std::vector<Connection> connections(const System& system) {
    std::vector<Connection> result;
    for (const auto& content : system.contents) {
        Connection connection{content.label, {}};
        for (const auto& context : system.contexts) {
            if (std::find(context.measured.begin(), context.measured.end(), content.label) !=
                context.measured.end())
                connection.sites.push_back(context.label);
        }
        if (!connection.sites.empty()) result.push_back(std::move(connection));
    }
    return result;
}

ConsistencyReport is_consistently_connected(const System& system) {
    ConsistencyReport report;
    for (const auto& connection : connections(system)) {
        if (connection.sites.size() < 2) continue;
        bool equal = true;
        Rational first = success_probability(system, connection.content, connection.sites[0]);
        for (std::size_t i = 1; i < connection.sites.size() && equal; ++i) {
            equal = success_probability(system, connection.content, connection.sites[i]) == first;
        }
        if (!equal) {
            report.consistent = false;
            report.violating.push_back(connection);
        }
    }
    return report;
}

Rational connection_max_equality(const Rational& p, const Rational& q) {
    if (p < 0 || p > 1 || q < 0 || q > 1)
        throw Error("connection_max_equality arguments must lie in [0, 1]");
    return 1 - abs(p - q);
}

System ingest_trials(const SystemFormat& format, const std::vector<TrialRecord>& records) {
    std::map<std::string, std::map<OutcomeTuple, unsigned long>> counts;
    std::map<std::string, unsigned long> totals;

    for (const auto& record : records) {
        const Context* context = format.find_context(record.context);
        if (!context) throw Error("unknown context '" + record.context + "' in trial record");
        if (record.outcome.arity() != context->measured.size())
            throw Error("trial for context '" + record.context + "' has arity " +
                        std::to_string(record.outcome.arity()) + ", expected " +
                        std::to_string(context->measured.size()));
        ++counts[record.context][record.outcome];
        ++totals[record.context];
    }

    System system;
    system.name = format.name;
    system.contents = format.contents;
    system.contexts = format.contexts;
    for (const auto& context : format.contexts) {
        auto it = totals.find(context.label);
        if (it == totals.end() || it->second == 0)
            throw Error("no trials recorded for context '" + context.label + "'");
        ContextPMF pmf;
        for (const auto& [outcome, count] : counts[context.label]) {
            pmf.entries[outcome] = Rational(count, it->second);
        }
        system.pmfs[context.label] = std::move(pmf);
    }
    return system;
}

}  // namespace cbd
