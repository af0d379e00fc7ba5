#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bgc {

// Input that could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(format(message, line, column)),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0 && column == 0) {
            return message;
        }
        std::string where;
        if (line != 0) {
            where += "line " + std::to_string(line);
        }
        if (column != 0) {
            where += (where.empty() ? "column " : ", column ") + std::to_string(column);
        }
        return where + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

// Well-formed input that violates a structural rule (partition, signs, vocabulary).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke the documented precondition of an operation.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An enumeration or search limit was hit before an answer was found.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::string what, std::size_t cap)
        : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

// A synthesized contract failed its brute-force re-check. Always a bug.
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bgc
