#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ionet {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed, inconsistent or otherwise unusable input data.
///
/// Row and column are 1-based positions in the source text when the error
/// comes from parsing; they are empty for errors found after construction.
class DataError : public Error {
public:
    explicit DataError(const std::string& what,
                       std::optional<std::size_t> row = std::nullopt,
                       std::optional<std::size_t> column = std::nullopt);

    std::optional<std::size_t> row() const noexcept { return row_; }
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    std::optional<std::size_t> row_;
    std::optional<std::size_t> column_;
};

/// Singular systems, spectral radius too close to one, non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Iterative method ran out of iterations before meeting its tolerance.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, int iterations, double last_change);

    int iterations() const noexcept { return iterations_; }
    double last_change() const noexcept { return last_change_; }

private:
    int iterations_;
    double last_change_;
};

/// Invalid run configuration or parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ionet
