#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace varjump {

// Raised when a caller passes parameters outside a function's domain.
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a state-space enumeration would exceed the configured budget.
struct budget_exceeded : std::runtime_error {
    std::uint64_t required;
    std::uint64_t budget;
    budget_exceeded(std::uint64_t required_, std::uint64_t budget_)
        : std::runtime_error("state budget exceeded: need " + std::to_string(required_) +
                             " states, budget is " + std::to_string(budget_)),
          required(required_), budget(budget_) {}
};

// Raised when an algorithm does not apply to the given instance (wrong graph
// family, unmet precondition on the profile, ...).
struct inapplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal bug guard: a constructor produced output that failed its own
// post-verification, or a generator failed a structural audit.
struct construction_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Malformed or unreadable input files.
struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace varjump
