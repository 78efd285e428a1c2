#pragma once

#include <span>

#include "allockit/numerics/matrix.hpp"

namespace allockit::numerics {

/// Lower-triangular Cholesky factor A = L Lᵀ of a symmetric positive-definite matrix.
///
/// Factorization fails with NotPositiveDefinite (carrying the zero-based pivot index)
/// as soon as a pivot falls to 1e-12 × max|diag(A)| or below. No repair is attempted;
/// callers that want ridge regularization add it themselves and refactor.
class Cholesky {
public:
    static constexpr double kRelativePivotTolerance = 1e-12;

    explicit Cholesky(const SymMatrix& a);

    std::size_t size() const noexcept { return lower_.rows(); }
    const Matrix& lower() const noexcept { return lower_; }

    Vector solve(std::span<const double> b) const;
    Matrix solve(const Matrix& b) const;

    /// Solves L y = b.
    Vector solve_lower(std::span<const double> b) const;

    double log_determinant() const;

private:
    Matrix lower_;
};

/// Solves A x = b for SPD A.
Vector spd_solve(const SymMatrix& a, std::span<const double> b);
Matrix spd_solve(const SymMatrix& a, const Matrix& b);

struct SymmetricEigen {
    Vector values;   ///< ascending
    Matrix vectors;  ///< column i pairs with values[i]
};

/// Cyclic Jacobi eigen-decomposition; intended for the small matrices used here.
SymmetricEigen symmetric_eigen(const SymMatrix& a, double tol = 1e-14, int max_sweeps = 100);

double smallest_eigenvalue(const SymMatrix& a);

}  // namespace allockit::numerics
