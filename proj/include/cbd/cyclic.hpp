#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbd/rational.hpp"
#include "cbd/system.hpp"

namespace cbd {

/// Cycle structure of a rank-n cyclic system: every context measures
/// exactly 2 contents, every content is measured in exactly 2 contexts, and
/// the content-context incidence graph is a single cycle of length 2n.
struct CyclicProfile {
    std::size_t rank = 0;
    /// Alternating labels content, context, content, context, ... of length
    /// 2n; the last context closes the cycle back to the first content.
    /// Canonical orientation: starts at the lexicographically smallest
    /// content and proceeds toward the lexicographically smaller of its two
    /// contexts.
    std::vector<std::string> cycle;
    /// correlations[k] = product expectation of the two contents measured
    /// by the k-th context of the cycle.
    std::vector<Rational> correlations;
};

/// Recognizes cyclic structure; none when the format is not a single cycle.
/// A declared content that no context measures also disqualifies.
std::optional<CyclicProfile> detect_cyclic(const System& system);

/// Maximum of the signed sum over all sign patterns with an odd number of
/// minus signs. Closed form; the definitional brute force is kept in tests.
Rational s_odd(const std::vector<Rational>& values);

enum class CyclicVerdict { Contextual, Noncontextual, NotApplicable };

/// Bell-type criterion for consistently connected cyclic systems:
/// contextual iff s_odd(correlations) > rank - 2. Inconsistently connected
/// systems are NotApplicable (the LP is the only route for them).
CyclicVerdict cyclic_criterion(const CyclicProfile& profile, bool consistently_connected);

std::string to_string(CyclicVerdict verdict);

}  // namespace cbd
