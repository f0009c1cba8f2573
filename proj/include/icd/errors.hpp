#pragma once

#include <stdexcept>

namespace icd {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Coincident or otherwise unusable atom positions.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

// Invalid parameter values, inconsistent inputs, or unknown unit tags.
class ValidationError : public Error {
public:
    using Error::Error;
};

// File reading / writing failures.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace icd
