#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvdag {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed configuration or unsupported combination of options.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

// Input outside the mathematical domain of an operation (e.g. negative adjacency).
class DomainError : public Error {
public:
    using Error::Error;
};

// A parameter violates 0 <= w'theta <= 1 under the linear link.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

} // namespace cvdag
