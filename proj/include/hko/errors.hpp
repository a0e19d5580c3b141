#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hko {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the expression parser; `offset` is the 0-based character
// position of the offending token in the input string.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

// Evaluation outside the domain, at a singular point, or producing a
// non-finite intermediate.
struct EvalError : Error {
    using Error::Error;
};

// Integrator / estimator failed to converge within its budget.
struct IntegrationError : Error {
    using Error::Error;
};

// Malformed construction arguments or input files (JSON specs, boxes, ...).
struct SpecError : Error {
    using Error::Error;
};

} // namespace hko
