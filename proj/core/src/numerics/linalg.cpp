#include "allockit/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "allockit/error.hpp"

namespace allockit::numerics {

Cholesky::Cholesky(const SymMatrix& a) : lower_(a.size(), a.size()) {
    const std::size_t n = a.size();
    const double threshold = kRelativePivotTolerance * a.max_diagonal();
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= lower_(j, k) * lower_(j, k);
        if (!(pivot > threshold)) throw NotPositiveDefinite(j);
        const double ljj = std::sqrt(pivot);
        lower_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / ljj;
        }
    }
}

Vector Cholesky::solve_lower(std::span<const double> b) const {
    const std::size_t n = size();
    if (b.size() != n) throw NumericError("right-hand side has wrong dimension");
    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    return y;
}

Vector Cholesky::solve(std::span<const double> b) const {
    Vector x = solve_lower(b);
    const std::size_t n = size();
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

Matrix Cholesky::solve(const Matrix& b) const {
    if (b.rows() != size()) throw NumericError("right-hand side has wrong dimension");
    Matrix out(b.rows(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        const Vector x = solve(b.column(c));
        for (std::size_t r = 0; r < b.rows(); ++r) out(r, c) = x[r];
    }
    return out;
}

double Cholesky::log_determinant() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += std::log(lower_(i, i));
    return 2.0 * s;
}

Vector spd_solve(const SymMatrix& a, std::span<const double> b) { return Cholesky(a).solve(b); }

Matrix spd_solve(const SymMatrix& a, const Matrix& b) { return Cholesky(a).solve(b); }

SymmetricEigen symmetric_eigen(const SymMatrix& a, double tol, int max_sweeps) {
    const std::size_t n = a.size();
    Matrix m = a.matrix();
    Matrix v = Matrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
        return std::sqrt(s);
    };
    double scale = 0.0;
    for (double x : m.data()) scale = std::max(scale, std::abs(x));

    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * std::max(scale, 1e-300); ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = m(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
    }
    return out;
}

double smallest_eigenvalue(const SymMatrix& a) {
    if (a.size() == 0) throw NumericError("empty matrix has no eigenvalues");
    return symmetric_eigen(a).values.front();
}

}  // namespace allockit::numerics
