#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace causal_loom {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structural system, equation, or identifier violates its invariants.
class ModelError : public Error {
public:
    using Error::Error;
};

/// A name (variable, equation, KB path) that does not exist was referenced.
class UnknownReferenceError : public Error {
public:
    using Error::Error;
};

/// Malformed `.sem` text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Forward evaluation failed (division by zero, non-finite intermediate).
class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& message,
                             std::optional<std::string> equation = std::nullopt)
        : Error(equation ? *equation + ": " + message : message),
          equation_(std::move(equation)) {}

    const std::optional<std::string>& equation() const noexcept { return equation_; }

private:
    std::optional<std::string> equation_;
};

/// Knowledge-base document or tree operation failure.
class KbError : public Error {
public:
    using Error::Error;
};

/// A workspace action conflicts with the pending over-constraint state.
class PendingStateError : public Error {
public:
    using Error::Error;
};

} // namespace causal_loom
