#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "bgc/error.hpp"

namespace bgc {

// Exact rational; always stored reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace detail

// rational := integer | integer "/" positive-integer
inline Rational parse_rational(std::string_view text) {
    text = detail::trim(text);
    std::string_view num = text;
    std::string_view den;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = detail::trim(text.substr(0, slash));
        den = detail::trim(text.substr(slash + 1));
        if (!detail::all_digits(den)) {
            throw ParseError("malformed rational '" + std::string(text) + "'");
        }
    }
    std::string_view digits = num;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        digits.remove_prefix(1);
    }
    if (!detail::all_digits(digits)) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    Integer n(std::string(num.front() == '+' ? num.substr(1) : num));
    if (den.empty()) {
        return Rational(n);
    }
    Integer d{std::string(den)};
    if (d == 0) {
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(n, d);
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace bgc
