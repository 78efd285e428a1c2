#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace allockit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV content, panel shapes, missing months).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (out-of-range alpha, unknown asset, rejected strategy setup).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical kernel could not produce a meaningful result.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization met a pivot at or below tolerance.
class NotPositiveDefinite : public NumericError {
public:
    explicit NotPositiveDefinite(std::size_t pivot)
        : NumericError("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

}  // namespace allockit
