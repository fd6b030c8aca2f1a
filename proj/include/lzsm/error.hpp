#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace lzsm {

/// Raised when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed grid/trace files. Carries the 1-based line number.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid or unreadable run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The decay fit found no positive decay rate.
class NoDecayError : public std::runtime_error {
public:
    NoDecayError() : std::runtime_error("no decay detected") {}
};

namespace detail {

inline void require(bool cond, const char* what) {
    if (!cond) throw PreconditionError(what);
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw PreconditionError(what);
}

}  // namespace detail
}  // namespace lzsm
