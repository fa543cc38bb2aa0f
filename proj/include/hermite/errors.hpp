#pragma once

#include <stdexcept>
#include <string>

namespace hermite {

/// Input violates a documented precondition (bad dimension, exponent, order...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced non-finite values or otherwise failed numerically.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Phase-space grid does not resolve the sampled transform (Nyquist violation).
/// Classified as a warning: the caller may retry on a finer grid.
class GridResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Fixed-point iteration did not reach its tolerance.
class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hermite
