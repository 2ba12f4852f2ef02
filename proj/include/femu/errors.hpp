#pragma once

#include <stdexcept>
#include <string>

namespace femu {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-length element or otherwise unusable geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Eigen-solve, FRF pole, or correlation failure.
class ModalError : public Error {
public:
    using Error::Error;
};

/// Non-finite objective or similar failure inside an optimizer loop.
class OptimizerError : public Error {
public:
    using Error::Error;
};

/// Configuration file or schema problem; message names the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace femu
