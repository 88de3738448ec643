#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace betalike {

/// Input failed a domain invariant (nonpositive time, bad flag combination, ...).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A file could not be parsed; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A numerical routine failed to meet its tolerance; carries the best estimate
/// and the estimated error bound at the point of failure.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

}  // namespace betalike
