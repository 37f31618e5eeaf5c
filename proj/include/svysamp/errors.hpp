#pragma once

#include <stdexcept>
#include <string>

namespace svysamp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// A probability lies outside (0, 1]; the message names the offending unit.
class ProbabilityOutOfRange : public Error {
public:
    using Error::Error;
};

class NonIntegerSampleSize : public Error {
public:
    using Error::Error;
};

class InvalidSize : public Error {
public:
    using Error::Error;
};

class ZeroDirection : public Error {
public:
    using Error::Error;
};

class NoConstraintsLeft : public Error {
public:
    using Error::Error;
};

class RequiresExactInclusion : public Error {
public:
    using Error::Error;
};

class NegativeY : public Error {
public:
    using Error::Error;
};

class UnsupportedDesign : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class EmptySequence : public Error {
public:
    using Error::Error;
};

class MalformedTrace : public Error {
public:
    using Error::Error;
};

class InsufficientSpan : public Error {
public:
    using Error::Error;
};

/// Bad command-line or file configuration (CLI exit status 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace svysamp
