#include "cbd/rational.hpp"

#include <cctype>

namespace cbd {

std::string to_string(const Rational& value) {
    return value.str();
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Integer pow10(std::size_t k) {
    Integer r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= 10;
    return r;
}

// Base-10 regardless of leading zeros (the string constructor would treat
// "09" as malformed octal).
Integer from_digits(std::string_view digits) {
    Integer value = 0;
    for (char c : digits) value = value * 10 + (c - '0');
    return value;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    Rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Integer d = from_digits(den);
        if (d == 0) return std::nullopt;
        value = Rational(from_digits(num), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
        if (frac.size() > static_cast<std::size_t>(kMaxDecimalDigits)) return std::nullopt;
        Integer scale = pow10(frac.size());
        Integer num = from_digits(whole) * scale + from_digits(frac);
        value = Rational(num, scale);
    } else {
        if (!all_digits(text)) return std::nullopt;
        value = Rational(from_digits(text));
    }
    if (negative) value = -value;
    return value;
}

}  // namespace cbd
