#include "allockit/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "allockit/error.hpp"

namespace allockit::numerics {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw NumericError("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t c) const {
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw NumericError("matrix product dimension mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw NumericError("matrix-vector dimension mismatch");
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw NumericError("symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double lo = m(i, j);
            const double hi = m(j, i);
            if (std::abs(lo - hi) > tol * (1.0 + std::max(std::abs(lo), std::abs(hi))))
                throw NumericError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            s.set(i, j, lo);
        }
    return s;
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    s.add_to_diagonal(1.0);
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

void SymMatrix::add_to_diagonal(double v) {
    for (std::size_t i = 0; i < size(); ++i) m_(i, i) += v;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < size(); ++i) t += m_(i, i);
    return t;
}

double SymMatrix::max_diagonal() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i) best = std::max(best, std::abs(m_(i, i)));
    return best;
}

SymMatrix SymMatrix::scaled(double s) const {
    SymMatrix out = *this;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) out.set(i, j, s * m_(i, j));
    return out;
}

Vector operator*(const SymMatrix& a, std::span<const double> x) { return a.matrix() * x; }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw NumericError("dot product dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double quadratic_form(const SymMatrix& a, std::span<const double> x) {
    const Vector ax = a * x;
    return dot(x, ax);
}

}  // namespace allockit::numerics
