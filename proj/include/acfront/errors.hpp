#pragma once

#include <stdexcept>
#include <string>

namespace acfront {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions (CLI exit code 2).
class UsageError : public Error {
public:
    using Error::Error;
};

class IndexError : public UsageError {
public:
    using UsageError::UsageError;
};

class InvalidNonlinearity : public UsageError {
public:
    using UsageError::UsageError;
};

/// Failures of a numerical procedure (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

class PinningDetected : public NumericalError {
public:
    explicit PinningDetected(double speed)
        : NumericalError("wave speed " + std::to_string(speed) + " is below the pinning threshold"),
          speed_(speed) {}
    double speed() const { return speed_; }

private:
    double speed_;
};

class NewtonDiverged : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateKernel : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SolveFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OutOfRange : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowGuard : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FlatnessViolated : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoDefinedRows : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedRows : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PreAsymptotic : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class H0Violated : public UsageError {
public:
    H0Violated(const std::string& edge, double value)
        : UsageError("front-like condition violated on the " + edge + " edge (value " +
                     std::to_string(value) + ")"),
          value_(value) {}
    double value() const { return value_; }

private:
    double value_;
};

/// A claimed sub/super-solution whose residual has the wrong sign somewhere.
class VerificationFailed : public Error {
public:
    VerificationFailed(const std::string& what, int i, int j, double t, double residual)
        : Error(what), i(i), j(j), t(t), residual(residual) {}
    int i;
    int j;
    double t;
    double residual;
};

}  // namespace acfront
