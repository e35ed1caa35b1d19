#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tweetq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A row or line in an input file could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Input parsed but violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
    ValidationError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// A caller passed an argument outside an operation's contract.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The host does not expose the counters the profiler needs.
class UnsupportedPlatform : public Error {
public:
    using Error::Error;
};

} // namespace tweetq
