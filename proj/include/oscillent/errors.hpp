#pragma once

#include <stdexcept>
#include <string>

namespace oscillent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Discretization too coarse or too small to represent the state.
class GridError : public Error {
public:
    using Error::Error;
};

/// A calculation was asked to run outside the regime where it is defined.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Sample set unusable for density estimation (duplicates, zero spread, too few).
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace oscillent
