#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbd {

/// Base class for every error this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in a system document, CSV trial file, or
/// rational literal. Positions are 1-based.
struct ParseError : Error {
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": " + message),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

/// The coupling LP would exceed the measurement-count guard.
struct SizeGuardError : Error {
    using Error::Error;
};

/// reduce_coupling was given a coupling in which some connection pair
/// agrees with probability below one.
struct ReductionError : Error {
    using Error::Error;
};

}  // namespace cbd
