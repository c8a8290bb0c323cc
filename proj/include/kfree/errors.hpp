#pragma once

#include <stdexcept>
#include <string>

namespace kfree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown identifiers, malformed specs and similar setup mistakes.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Checked 64-bit arithmetic would have overflowed.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

/// A size or search limit was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// The caller did not establish a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace kfree
