#pragma once

#include <stdexcept>
#include <string>

namespace editio {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value (bad policy, out-of-range parameter).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation called with arguments violating its contract.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure; the message names the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents; the message carries a byte offset when known.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A dynamic-programming band excluded every complete path.
/// Callers should retry with a wider band.
class BandingError : public Error {
public:
    using Error::Error;
};

/// Non-recoverable numerical failure.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace editio
