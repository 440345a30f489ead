// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace xcorr {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Coincident points, superluminal velocities, degenerate directions.
class GeometryError : public Error {
public:
    using Error::Error;
};

// A parameter outside its admissible range (indices, sizes, fractions, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent persisted data.
class FormatError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", residual=" + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace xcorr
