#pragma once

#include <stdexcept>
#include <string>

namespace pita {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something inconsistent: shapes, step counts, schedules,
// term counts. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// The arithmetic itself broke down. The CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DimensionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class StepCountError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InsufficientTermsError : public InvalidArgument {
public:
    InsufficientTermsError(const std::string& what, std::size_t required)
        : InvalidArgument(what), required_(required) {}

    [[nodiscard]] std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

class ScheduleError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class NonFiniteError : public NumericalError {
public:
    explicit NonFiniteError(const std::string& what, long step = -1)
        : NumericalError(what), step_(step) {}

    /// Index of the propagation step that overflowed, or -1 when not applicable.
    [[nodiscard]] long step() const noexcept { return step_; }

private:
    long step_;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateDenominatorError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace pita
