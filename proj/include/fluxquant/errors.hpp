#pragma once

#include <stdexcept>
#include <string>

namespace fluxquant {

// Caller passed objects that violate a cross-module contract (e.g. overlap of
// spectra computed under different flux allocations).
class ContractViolationError : public std::logic_error {
public:
    explicit ContractViolationError(const std::string& msg) : std::logic_error(msg) {}
};

// The potential curvature entering a perturbative denominator vanished.
class SingularConfigurationError : public std::runtime_error {
public:
    explicit SingularConfigurationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Time integration failed its step-size convergence check.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& msg, double residual)
        : std::runtime_error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file; carries the offending line number (1-based).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace fluxquant
