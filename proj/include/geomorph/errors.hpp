#pragma once

#include <stdexcept>
#include <string>

namespace geomorph {

/// Raised when a field, form or parameter set violates an operation's
/// precondition (grid mismatch, non-finite data, bad degree, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time or virtual-time integration produced non-finite or non-positive
/// values. Carries the step index at which it was detected.
class NumericalInstability : public std::runtime_error {
public:
    NumericalInstability(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), detail_(what), step_(step) {}

    long step() const noexcept { return step_; }

    /// Same failure with `context` prepended to the message.
    NumericalInstability in_context(const std::string& context) const { return {context + detail_, step_}; }

private:
    std::string detail_;
    long step_;
};

} // namespace geomorph
