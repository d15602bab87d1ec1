#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cbd/system.hpp"

namespace cbd {

/// Parses a system document. Line-oriented grammar:
///
///   system "<name>"                                  (optional, first line)
///   contents <label> <label> ...                     (repeatable, appends)
///   context <label> measures <label> ... { <outcome>: <rational>, ... }
///
/// `<outcome>` is a +/- string of the context's arity; `<rational>` is p/q
/// or a decimal with at most 9 fraction digits, converted exactly. `#`
/// starts a comment (outside quotes). Labels are any run of characters
/// free of whitespace, quotes, `#`, and the punctuation `{ } : ,`.
///
/// The result always passes validate; any violation (unknown content,
/// arity mismatch, duplicate outcome key, unnormalized PMF with its exact
/// sum, ...) is thrown as ParseError with a 1-based line and column.
System parse(std::string_view text);

/// Same grammar with the distribution block optional; distributions are
/// parsed (and checked) when present but dropped. Used for trial ingestion,
/// where only the structure matters.
SystemFormat parse_format(std::string_view text);

/// Canonical byte-stable form: name line (when the name is nonempty), one
/// contents line, one context line per context in declared order, outcomes
/// in lexicographic order (+ before -), zero entries omitted, rationals in
/// lowest terms. parse(serialize(s)) == s for any s built from the grammar.
std::string serialize(const System& system);

/// Trial table: header `context,<content>,...` naming the format's contents
/// in declared order; one row per trial with cells +1, -1, or empty, where
/// a cell is nonempty exactly when the row's context measures that content.
/// Throws ParseError (1-based line/column) on any deviation.
std::vector<TrialRecord> parse_trials_csv(std::string_view text, const SystemFormat& format);

}  // namespace cbd
