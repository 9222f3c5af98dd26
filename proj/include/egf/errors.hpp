#pragma once

#include <stdexcept>
#include <string>

namespace egf {

/// Bad arguments or malformed configuration.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver was asked to run on a system whose coefficient matrix has no
/// complete real eigenbasis.
class NotHyperbolicError : public std::runtime_error {
public:
    explicit NotHyperbolicError(const std::string& what, std::string details = {})
        : std::runtime_error(what), details_(std::move(details)) {}
    const std::string& details() const { return details_; }

private:
    std::string details_;
};

/// Requested time is at or beyond the life span of the classical solution.
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& what, double blowup_time)
        : std::runtime_error(what), blowup_time_(blowup_time) {}
    double blowup_time() const { return blowup_time_; }

private:
    double blowup_time_;
};

/// Iteration failed to converge or values left the representable range.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double last_valid_time = 0.0)
        : std::runtime_error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const { return last_valid_time_; }

private:
    double last_valid_time_;
};

} // namespace egf
