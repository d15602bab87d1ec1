#include "cbd/report.hpp"

#include <chrono>
#include <utility>

#include "json.hpp"

#include "cbd/errors.hpp"

namespace cbd {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DuplicateContentLabel: return "duplicate-content-label";
        case ViolationKind::EmptyContentLabel: return "empty-content-label";
        case ViolationKind::DuplicateContextLabel: return "duplicate-context-label";
        case ViolationKind::EmptyMeasuredList: return "empty-measured-list";
        case ViolationKind::DuplicateMeasured: return "duplicate-measured";
        case ViolationKind::UnknownContent: return "unknown-content";
        case ViolationKind::MissingPmf: return "missing-pmf";
        case ViolationKind::UnknownPmfContext: return "unknown-pmf-context";
        case ViolationKind::ArityMismatch: return "arity-mismatch";
        case ViolationKind::NegativeProbability: return "negative-probability";
        case ViolationKind::UnnormalizedPmf: return "unnormalized-pmf";
    }
    return "unknown";
}

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

ordered_json witness_json(const System& system, const std::optional<Coupling>& witness) {
    if (!witness) return nullptr;
    ordered_json atoms = ordered_json::array();
    for (const auto& [index, probability] : witness->atoms) {
        if (probability == 0) continue;
        atoms.push_back({{"assignment", assignment_string(system, index)},
                         {"probability", to_string(probability)}});
    }
    return {{"atoms", std::move(atoms)}};
}

ordered_json certificate_json(const std::optional<FarkasCertificate>& certificate) {
    if (!certificate) return nullptr;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < certificate->coefficient.size(); ++i) {
        if (certificate->coefficient[i] == 0) continue;
        rows.push_back({{"row", certificate->row_label[i]},
                        {"coefficient", to_string(certificate->coefficient[i])}});
    }
    return {{"rows", std::move(rows)}};
}

std::string join(const std::vector<std::string>& parts, const std::string& separator) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += separator;
        out += parts[i];
    }
    return out;
}

std::string correlations_text(const std::vector<Rational>& correlations) {
    std::vector<std::string> parts;
    parts.reserve(correlations.size());
    for (const auto& value : correlations) parts.push_back(to_string(value));
    return join(parts, ", ");
}

}  // namespace

Report analyze_system(const System& system) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.system = system;
    report.validation = validate(system);
    if (!report.validation.ok())
        throw Error("system does not validate: " + report.validation.violations.front().message);

    report.consistency = is_consistently_connected(system);
    report.cyclic = detect_cyclic(system);
    if (report.cyclic) {
        report.s_odd_value = s_odd(report.cyclic->correlations);
        report.cyclic_verdict = cyclic_criterion(*report.cyclic, report.consistency.consistent);
    }

    const auto analyze_start = std::chrono::steady_clock::now();
    report.analysis = decide_contextuality(system);
    report.timings.analyze_ms = elapsed_ms(analyze_start);

    const auto perfect_start = std::chrono::steady_clock::now();
    report.perfect = check_perfect_coupling(system);
    report.timings.perfect_ms = elapsed_ms(perfect_start);

    report.timings.total_ms = elapsed_ms(start);
    return report;
}

std::string report_to_json(const Report& report) {
    ordered_json j;
    j["schema"] = "cbd.report/1";

    ordered_json contexts = ordered_json::array();
    for (const auto& context : report.system.contexts)
        contexts.push_back({{"label", context.label}, {"measures", context.measured}});
    ordered_json contents = ordered_json::array();
    for (const auto& content : report.system.contents) contents.push_back(content.label);
    j["system"] = {{"name", report.system.name},
                   {"contents", std::move(contents)},
                   {"contexts", std::move(contexts)}};

    ordered_json violations = ordered_json::array();
    for (const auto& violation : report.validation.violations)
        violations.push_back(
            {{"kind", kind_name(violation.kind)}, {"message", violation.message}});
    j["validation"] = {{"valid", report.validation.ok()},
                       {"violations", std::move(violations)}};

    ordered_json violating = ordered_json::array();
    for (const auto& connection : report.consistency.violating)
        violating.push_back({{"content", connection.content}, {"contexts", connection.sites}});
    j["consistent_connectedness"] = {{"consistent", report.consistency.consistent},
                                     {"violating", std::move(violating)}};

    if (report.cyclic) {
        ordered_json correlations = ordered_json::array();
        for (const auto& value : report.cyclic->correlations)
            correlations.push_back(to_string(value));
        j["cyclic"] = {{"rank", report.cyclic->rank},
                       {"cycle", report.cyclic->cycle},
                       {"correlations", std::move(correlations)},
                       {"s_odd", to_string(report.s_odd_value)},
                       {"bound", to_string(Rational(static_cast<int>(report.cyclic->rank) - 2))},
                       {"verdict", to_string(report.cyclic_verdict)}};
    } else {
        j["cyclic"] = nullptr;
    }

    j["analysis"] = {{"contextual", report.analysis.contextual},
                     {"delta", to_string(report.analysis.delta)},
                     {"max_total", to_string(report.analysis.max_total)},
                     {"attained_total", to_string(report.analysis.attained_total)},
                     {"witness", witness_json(report.system, report.analysis.witness)}};

    j["perfect_coupling"] = {{"feasible", report.perfect.feasible},
                             {"witness", witness_json(report.system, report.perfect.witness)},
                             {"certificate", certificate_json(report.perfect.certificate)}};

    j["timings_ms"] = {{"analyze", report.timings.analyze_ms},
                       {"perfect", report.timings.perfect_ms},
                       {"total", report.timings.total_ms}};
    return j.dump(2);
}

std::string report_to_text(const Report& report, bool show_witness) {
    std::string out;
    out += "system: " + (report.system.name.empty() ? "(unnamed)" : report.system.name) + "\n";
    out += "valid: " + std::string(report.validation.ok() ? "yes" : "no") + "\n";

    out += "consistently connected: ";
    out += report.consistency.consistent ? "yes" : "no";
    out += "\n";
    for (const auto& connection : report.consistency.violating)
        out += "  unequal marginals for " + connection.content + " across " +
               join(connection.sites, ", ") + "\n";

    if (report.cyclic) {
        out += "cyclic: rank " + std::to_string(report.cyclic->rank) + ", cycle " +
               join(report.cyclic->cycle, " - ") + "\n";
        out += "  correlations: " + correlations_text(report.cyclic->correlations) + "\n";
        out += "  s_odd: " + to_string(report.s_odd_value) + ", bound: " +
               to_string(Rational(static_cast<int>(report.cyclic->rank) - 2)) +
               ", verdict: " + to_string(report.cyclic_verdict) + "\n";
    } else {
        out += "cyclic: no\n";
    }

    out += "analysis: ";
    out += report.analysis.contextual ? "contextual" : "noncontextual";
    out += " (delta = " + to_string(report.analysis.delta) + ", attained " +
           to_string(report.analysis.attained_total) + " of " +
           to_string(report.analysis.max_total) + ")\n";
    if (show_witness && report.analysis.witness) {
        out += "  witness coupling:\n";
        for (const auto& [index, probability] : report.analysis.witness->atoms) {
            if (probability == 0) continue;
            out += "    " + assignment_string(report.system, index) + " : " +
                   to_string(probability) + "\n";
        }
    }

    out += "perfect coupling: ";
    out += report.perfect.feasible ? "feasible" : "infeasible";
    out += "\n";
    if (show_witness && report.perfect.witness) {
        out += "  witness coupling:\n";
        for (const auto& [index, probability] : report.perfect.witness->atoms) {
            if (probability == 0) continue;
            out += "    " + assignment_string(report.system, index) + " : " +
                   to_string(probability) + "\n";
        }
    }
    if (report.perfect.certificate) {
        out += "  infeasibility certificate (combined rows never exceed 0, total > 0):\n";
        const auto& certificate = *report.perfect.certificate;
        for (std::size_t i = 0; i < certificate.coefficient.size(); ++i) {
            if (certificate.coefficient[i] == 0) continue;
            out += "    " + to_string(certificate.coefficient[i]) + " * [" +
                   certificate.row_label[i] + "]\n";
        }
    }

    out += "timings: analyze " + std::to_string(report.timings.analyze_ms) + " ms, perfect " +
           std::to_string(report.timings.perfect_ms) + " ms\n";
    return out;
}

std::string cyclic_to_text(const Report& report) {
    if (!report.cyclic) return "not cyclic\n";
    std::string out;
    out += "rank: " + std::to_string(report.cyclic->rank) + "\n";
    out += "cycle: " + join(report.cyclic->cycle, " - ") + "\n";
    out += "correlations: " + correlations_text(report.cyclic->correlations) + "\n";
    out += "s_odd: " + to_string(report.s_odd_value) + ", bound: " +
           to_string(Rational(static_cast<int>(report.cyclic->rank) - 2)) + "\n";
    out += "verdict: " + to_string(report.cyclic_verdict);
    if (report.cyclic_verdict == CyclicVerdict::NotApplicable)
        out += " (inconsistently connected)";
    out += "\n";
    return out;
}

std::string lambda_to_text(const LambdaModel& model) {
    std::string out;
    out += "contents: " + join(model.contents, " ") + "\n";
    out += "atoms: " + std::to_string(model.atoms.size()) + "\n";
    for (const auto& atom : model.atoms)
        out += "  " + atom.id + " : " + to_string(atom.probability) + "\n";
    out += "responses:\n";
    for (const auto& content : model.contents) {
        out += "  " + content + ":";
        bool first = true;
        for (const auto& atom : model.atoms) {
            Sign value = model.responses.at(content).at(atom.id);
            out += first ? " " : ", ";
            out += atom.id + " -> " + (value > 0 ? "+1" : "-1");
            first = false;
        }
        out += "\n";
    }
    return out;
}

}  // namespace cbd
