#pragma once

#include <stdexcept>
#include <string>

namespace pnp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
public:
    using Error::Error;
};

/// Neumann data and total charge do not balance; the Poisson problem has no solution.
class CompatibilityError : public Error {
public:
    CompatibilityError(const std::string& what, double defect)
        : Error(what), defect_(defect) {}

    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/// Requested time step exceeds the positivity bound (strict policy only).
class CflViolationError : public Error {
public:
    CflViolationError(const std::string& what, double step, double bound)
        : Error(what), step_(step), bound_(bound) {}

    double step() const noexcept { return step_; }
    double bound() const noexcept { return bound_; }

private:
    double step_;
    double bound_;
};

/// An update produced a negative concentration.
class PositivityViolationError : public Error {
public:
    PositivityViolationError(const std::string& what, double min_value)
        : Error(what), min_value_(min_value) {}

    double min_value() const noexcept { return min_value_; }

private:
    double min_value_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed or semantically invalid run configuration.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(what), line_(line) {}

    /// 1-based line of the offending text, 0 when not tied to a location.
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace pnp
