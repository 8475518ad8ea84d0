#pragma once

#include <stdexcept>
#include <string>

namespace erps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its stated preconditions.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// State has non-negligible density too close to a periodic boundary.
class BoundarySupportError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A field was queried at a masked node, where it is undefined.
class NodeQueryError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown (non-finite values, degenerate distributions).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace erps
