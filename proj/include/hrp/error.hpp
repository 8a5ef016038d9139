#pragma once

#include <stdexcept>
#include <string>

namespace hrp {

/// Base for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input could not be read or parsed (bad CSV, malformed date, unreadable file).
class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Input parsed but violates a data invariant (non-positive price, duplicate ticker).
class ValidationError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

/// A matrix decomposition failed even after ridge repair.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegeneratePortfolioError : public Error {
public:
    using Error::Error;
};

/// A performance metric has a zero denominator.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace hrp
