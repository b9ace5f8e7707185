#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thetaforge {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (Im tau <= 0, bad modulus, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation at (or numerically at) a pole or a vanishing denominator.
class PoleError : public Error {
public:
    using Error::Error;
};

// A series or product failed to reach its tail bound.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Exact series arithmetic refused an operation.
class FormalError : public Error {
public:
    using Error::Error;
};

// Decomposition engine failures (reconstruction mismatch, non-simple pole, ...).
class DecompositionError : public Error {
public:
    using Error::Error;
};

class NonSimplePoleError : public DecompositionError {
public:
    using DecompositionError::DecompositionError;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), message_(message), position_(position) {}

    std::size_t position() const noexcept { return position_; }
    // Text without the position suffix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t position_;
};

}  // namespace thetaforge
