#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qis {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Non-finite entries, inconsistent dimensions, bad configuration values.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid_input", what) {}
};

class IndexError : public Error {
public:
    IndexError(std::size_t index, std::size_t size)
        : Error("index_error", "index " + std::to_string(index) +
                                   " out of range for dimension " + std::to_string(size)) {}
};

/// Sampling was requested from a distribution with zero total weight.
class EmptyDistribution : public Error {
public:
    explicit EmptyDistribution(const std::string& what) : Error("empty_distribution", what) {}
};

/// A projection step was asked to use a row (or diagonal entry) of zero norm.
class DegenerateRow : public Error {
public:
    explicit DegenerateRow(std::size_t row)
        : Error("degenerate_row", "row " + std::to_string(row) + " has zero norm"), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

/// Rejection sampling exhausted its attempt cap.
class SamplingFailure : public Error {
public:
    explicit SamplingFailure(const std::string& what) : Error("sampling_failure", what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error("parse_error", source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class GenerationError : public Error {
public:
    explicit GenerationError(const std::string& what) : Error("generation_error", what) {}
};

} // namespace qis
