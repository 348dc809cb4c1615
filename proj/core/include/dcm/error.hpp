#pragma once

#include <stdexcept>
#include <string>

namespace dcm {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on user-supplied judgments or model inputs was violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed external text (CSV, JSON, exact-number literals).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? message
                          : "line " + std::to_string(line) +
                                (column == 0 ? "" : ", column " + std::to_string(column)) + ": " +
                                message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A reference-list lookup had no entry and the strict policy is active.
class MissingDataError : public Error {
public:
    using Error::Error;
};

}  // namespace dcm
