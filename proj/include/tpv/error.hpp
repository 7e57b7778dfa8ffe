// error.hpp -- error types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpv {

/// Base class for all recoverable library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input text could not be parsed. Carries the position of the offending token.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::string token, const std::string& message)
        : Error(format(line, column, token, message)),
          line_(line),
          column_(column),
          token_(std::move(token)) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& token() const { return token_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& token,
                              const std::string& message) {
        std::string out = "parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + message;
        if (!token.empty()) { out += " (near '" + token + "')"; }
        return out;
    }

    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

/// A syntactically well-formed description violates a model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A function was called outside its stated contract.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

} // namespace tpv
