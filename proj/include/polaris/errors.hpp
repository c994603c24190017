#pragma once

#include <stdexcept>
#include <string>

namespace polaris {

// Invalid parameters, malformed config files, mismatched dimensions.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation evaluated where the schedule degenerates (alpha_bar hits 0 or 1).
class DegenerateTimestepError : public std::runtime_error {
public:
    explicit DegenerateTimestepError(const std::string& msg) : std::runtime_error(msg) {}
};

// ||b||^2 underflows in the exact guidance-scale rule.
class IllPosedStateError : public std::runtime_error {
public:
    explicit IllPosedStateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Replay policy ran past the end of its recorded scale list.
class ScheduleLengthError : public std::runtime_error {
public:
    explicit ScheduleLengthError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric precondition of a perturbation study violated.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace polaris
