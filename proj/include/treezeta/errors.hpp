#pragma once

#include <stdexcept>
#include <string>

namespace treezeta {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (graphs, diagrams, paths).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A mathematical obstruction: poles, singular systems, violated settings.
class MathError : public Error {
public:
    using Error::Error;
};

// The denominator determinant vanishes while the numerator does not.
class PoleError : public MathError {
public:
    using MathError::MathError;
};

// Numerator and denominator determinants both vanish.
class IndeterminateError : public MathError {
public:
    using MathError::MathError;
};

// A linear system that has to be solved is singular.
class SingularError : public MathError {
public:
    using MathError::MathError;
};

// The hypotheses needed by an operation are not met by its input.
class SettingError : public MathError {
public:
    using MathError::MathError;
};

// A brute-force computation would exceed its configured size cap.
class CapacityError : public MathError {
public:
    using MathError::MathError;
};

// Two independent evaluations of the same quantity disagree.
class InternalCheckError : public Error {
public:
    using Error::Error;
};

}  // namespace treezeta
