#pragma once

#include <stdexcept>
#include <string>

namespace dmv {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class NotAntisymmetric : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when a chart map is evaluated too close to its singular locus.
class NearSingular : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

/// Noncompact integrals require exponential damping of the test function.
class NonIntegrable : public Error {
public:
    using Error::Error;
};

class UnsupportedFamily : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dmv
