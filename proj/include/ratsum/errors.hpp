#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratsum {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact division by a zero rational.
struct DivisionByZero : Error {
    using Error::Error;
};

/// Interval division where the divisor contains zero.
struct DivisionByZeroInterval : DivisionByZero {
    using DivisionByZero::DivisionByZero;
};

/// A computation exceeded an implementation resource limit (factorial of a
/// huge argument, orbit values past the exact bit budget, ...).
struct CapacityError : Error {
    using Error::Error;
};

/// Malformed input text. `position` is a 0-based offset into the source.
struct SyntaxError : Error {
    std::size_t position;
    std::string expected;

    SyntaxError(std::size_t pos, std::string expected_set)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected_set),
          position(pos),
          expected(std::move(expected_set)) {}
};

/// An identifier other than the ones allowed in the current context.
struct UnknownIdentifier : Error {
    std::string name;
    std::size_t position;

    UnknownIdentifier(std::string ident, std::size_t pos)
        : Error("unknown identifier '" + ident + "' at position " + std::to_string(pos)),
          name(std::move(ident)),
          position(pos) {}
};

/// Base for runtime evaluation failures; carries the sequence index at which
/// evaluation broke down.
struct EvalError : Error {
    std::uint64_t index;

    EvalError(const std::string& what, std::uint64_t at)
        : Error(what + " (at index " + std::to_string(at) + ")"), index(at) {}
};

struct EvalDivisionByZero : EvalError {
    explicit EvalDivisionByZero(std::uint64_t at) : EvalError("division by zero", at) {}
};

struct FactorialDomainError : EvalError {
    explicit FactorialDomainError(std::uint64_t at)
        : EvalError("factorial of a negative or non-integer value", at) {}
};

struct ExponentNotInteger : EvalError {
    explicit ExponentNotInteger(std::uint64_t at)
        : EvalError("exponent does not evaluate to an integer", at) {}
};

/// A value is outside the domain a sequence family is defined on
/// (e.g. an index that is not a perfect cube).
struct DomainError : EvalError {
    DomainError(const std::string& what, std::uint64_t at) : EvalError(what, at) {}
};

/// The alternating-series precondition failed. `index` is the 1-based
/// position of the first offending term.
struct NotAlternating : Error {
    std::size_t index;

    explicit NotAlternating(std::size_t at)
        : Error("terms are not strictly alternating and decreasing at term " + std::to_string(at)),
          index(at) {}
};

struct InsufficientData : Error {
    using Error::Error;
};

struct DegenerateTable : Error {
    using Error::Error;
};

struct DegenerateSystem : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

struct UnknownConstant : Error {
    explicit UnknownConstant(const std::string& name) : Error("unknown constant '" + name + "'") {}
};

struct PrecisionUnachievable : Error {
    using Error::Error;
};

}  // namespace ratsum
