#pragma once

#include <stdexcept>
#include <string>

namespace uavcov {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input files or CLI values that cannot be parsed.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates a domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Target too close to the base for the standoff geometry.
struct DegenerateTarget : ValidationError {
    using ValidationError::ValidationError;
};

// All pairwise distances collapsed; no meaningful clustering possible.
struct DegenerateGeometry : ValidationError {
    using ValidationError::ValidationError;
};

// Rejection sampling exhausted its attempt budget.
struct GenerationFailure : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

} // namespace uavcov
