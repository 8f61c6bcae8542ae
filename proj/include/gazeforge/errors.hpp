#pragma once

#include <stdexcept>
#include <string>

namespace gazeforge {

// Bad input data: malformed files, degenerate signals, missing classes.
// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SignalTooShort : public DataError {
public:
    using DataError::DataError;
};

// A participant has no segment of the requested kind.
class EmptyChannel : public DataError {
public:
    using DataError::DataError;
};

// Invalid configuration or violated precondition supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gazeforge
