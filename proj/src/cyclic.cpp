#include "cbd/cyclic.hpp"

#include <algorithm>
#include <map>

namespace cbd {

std::optional<CyclicProfile> detect_cyclic(const System& system) {
    const std::size_t n = system.contexts.size();
    if (n < 2 || system.contents.size() != n) return std::nullopt;

    // content label -> labels of the (exactly two) contexts measuring it
    std::map<std::string, std::vector<std::string>> homes;
    for (const auto& context : system.contexts) {
        if (context.measured.size() != 2) return std::nullopt;
        for (const auto& content : context.measured) homes[content].push_back(context.label);
    }
    for (const auto& content : system.contents) {
        auto it = homes.find(content.label);
        if (it == homes.end() || it->second.size() != 2) return std::nullopt;
    }
    if (homes.size() != n) return std::nullopt;

    std::string start = system.contents.front().label;
    for (const auto& content : system.contents) start = std::min(start, content.label);

    CyclicProfile profile;
    profile.rank = n;

    std::string content = start;
    std::string context = std::min(homes[start][0], homes[start][1]);
    std::map<std::string, bool> seen;
    for (std::size_t step = 0; step < n; ++step) {
        if (seen[content]) return std::nullopt;  // lapped a shorter cycle
        seen[content] = true;
        profile.cycle.push_back(content);
        profile.cycle.push_back(context);
        const Context* ctx = system.find_context(context);
        const std::string& next_content =
            ctx->measured[0] == content ? ctx->measured[1] : ctx->measured[0];
        profile.correlations.push_back(correlation(system, context, content, next_content));
        const auto& pair = homes[next_content];
        const std::string& next_context = pair[0] == context ? pair[1] : pair[0];
        content = next_content;
        context = next_context;
    }
    // A closed walk of length 2n through 2n distinct vertices is the whole
    // graph exactly when it returns to its start; otherwise the format
    // splits into several shorter cycles.
    if (content != start) return std::nullopt;
    return profile;
}

Rational s_odd(const std::vector<Rational>& values) {
    // Choosing the sign of each term freely gives sum of |values| with a
    // minus count of parity (number of negative entries); when that parity
    // is even, the cheapest repair flips the smallest magnitude (free if a
    // zero is present).
    Rational total = 0;
    bool odd = false;
    bool has_zero = false;
    Rational smallest;
    bool first = true;
    for (const auto& v : values) {
        Rational magnitude = v < 0 ? -v : v;
        total += magnitude;
        if (v < 0) odd = !odd;
        if (v == 0) has_zero = true;
        if (first || magnitude < smallest) {
            smallest = magnitude;
            first = false;
        }
    }
    if (odd || has_zero) return total;
    return total - 2 * smallest;
}

CyclicVerdict cyclic_criterion(const CyclicProfile& profile, bool consistently_connected) {
    if (!consistently_connected) return CyclicVerdict::NotApplicable;
    Rational bound = static_cast<int>(profile.rank) - 2;
    return s_odd(profile.correlations) > bound ? CyclicVerdict::Contextual
                                               : CyclicVerdict::Noncontextual;
}

std::string to_string(CyclicVerdict verdict) {
    switch (verdict) {
        case CyclicVerdict::Contextual: return "contextual";
        case CyclicVerdict::Noncontextual: return "noncontextual";
        case CyclicVerdict::NotApplicable: return "not-applicable";
    }
    return "unknown";
}

}  // namespace cbd
