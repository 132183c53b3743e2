#pragma once

#include <stdexcept>
#include <string>

namespace crowdtex {

/// Base for every error the library raises on bad input or environment.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input bytes are readable but do not match the expected format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value or inconsistent parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace crowdtex
