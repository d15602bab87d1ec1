#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace cbd {

/// Exact rational scalar used everywhere a probability, correlation, or
/// LP coefficient appears. GMP-backed and kept canonical (lowest terms,
/// positive denominator) by boost::multiprecision.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Largest number of fraction digits accepted in a decimal literal.
inline constexpr int kMaxDecimalDigits = 9;

/// Canonical text form: "p/q" in lowest terms, plain "p" when q == 1.
std::string to_string(const Rational& value);

/// Parses "p/q", an integer, or a decimal with at most kMaxDecimalDigits
/// fraction digits (converted exactly, e.g. "0.5" -> 1/2). An optional
/// leading '-' is accepted. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace cbd
