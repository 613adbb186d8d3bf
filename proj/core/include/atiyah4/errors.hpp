#pragma once

#include <stdexcept>

namespace atiyah4 {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad norm, coincident points, ...).
struct InvalidInputError : Error {
    using Error::Error;
};

// Arithmetic hit a degenerate denominator or an indeterminate solve.
struct DegenerateInputError : Error {
    using Error::Error;
};

// Two independent computation routes disagree beyond tolerance.
struct ConsistencyError : Error {
    using Error::Error;
};

// A rejection sampler exhausted its retry budget.
struct SamplingError : Error {
    using Error::Error;
};

}  // namespace atiyah4
