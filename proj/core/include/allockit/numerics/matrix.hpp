#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace allockit::numerics {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    Vector column(std::size_t c) const;

    Matrix transposed() const;

    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Square matrix whose symmetry holds exactly: every write mirrors across the diagonal.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n, double fill = 0.0) : m_(n, n, fill) {}

    /// Copies the lower triangle of `m` into both triangles. Throws NumericError
    /// when `m` is not square or its triangles differ by more than `tol`.
    static SymMatrix from_matrix(const Matrix& m, double tol = 1e-10);
    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(std::span<const double> d);

    std::size_t size() const noexcept { return m_.rows(); }

    double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    void set(std::size_t r, std::size_t c, double v) {
        m_(r, c) = v;
        m_(c, r) = v;
    }
    void add_to_diagonal(double v);

    double trace() const;
    double max_diagonal() const;
    SymMatrix scaled(double s) const;

    const Matrix& matrix() const noexcept { return m_; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

Vector operator*(const SymMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm_inf(std::span<const double> a);
double quadratic_form(const SymMatrix& a, std::span<const double> x);

}  // namespace allockit::numerics
