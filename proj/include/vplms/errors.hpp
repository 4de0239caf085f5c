#pragma once

#include <stdexcept>
#include <string>

namespace vplms {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// Sequence lengths that must agree do not.
class DimensionError : public Error
{
public:
    using Error::Error;
};

/// A regressor was requested before a full window of samples exists.
class WindowUnavailable : public Error
{
public:
    using Error::Error;
};

class NumericFailure : public Error
{
public:
    using Error::Error;
};

/// An operation needs the true system weights and none were supplied.
class OracleUnavailable : public Error
{
public:
    using Error::Error;
};

/// A finite-difference probe would leave the admissible range of p.
class DomainError : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

}  // namespace vplms
