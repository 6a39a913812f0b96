#pragma once

#include <stdexcept>
#include <string>

namespace miro {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration (K out of range, inconsistent chain settings, ...).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Input data violates a dataset invariant or fails to parse.
class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// No regression rows: every unit sits in the empty configuration.
class DegenerateDesign : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace miro
