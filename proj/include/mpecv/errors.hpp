#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpecv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The evaluation point lies outside the expression's domain.
class DivisionByZero : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// No subdifferential rule applies; a manual vertex set must be supplied.
class RuleFailure : public Error {
public:
    RuleFailure(std::string function, const std::string& reason)
        : Error("no subdifferential rule for " + (function.empty() ? std::string("expression") : function) +
                ": " + reason),
          function_(std::move(function)), reason_(reason) {}

    const std::string& function() const { return function_; }
    const std::string& reason() const { return reason_; }

private:
    std::string function_;
    std::string reason_;
};

class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// Every dual set entering a linearization cone is empty.
class AllPoolsEmpty : public Error {
public:
    using Error::Error;
};

class BranchCapExceeded : public Error {
public:
    BranchCapExceeded(std::size_t omega_size, std::size_t cap)
        : Error("degenerate set has " + std::to_string(omega_size) + " indices, branch cap is " +
                std::to_string(cap)),
          omega_size_(omega_size) {}

    std::size_t omega_size() const { return omega_size_; }

private:
    std::size_t omega_size_;
};

class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& reason)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + reason),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace mpecv
