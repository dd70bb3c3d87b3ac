#pragma once

// Small dense linear algebra: just enough to assemble and verify the
// certificate matrices (n <= ~10). Row-major storage, value semantics.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace symabs {

using Vector = std::vector<double>;

inline constexpr double kDefaultTol = 1e-9;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    /// Throws DimensionMismatch on ragged input and NonFinite on NaN/inf entries.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::vector<std::vector<double>> to_rows() const;

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] bool all_finite() const noexcept;
    /// max_ij |m_ij - m_ji|; requires a square matrix.
    [[nodiscard]] double asymmetry() const;

    /// Copies `block` into this matrix with its top-left corner at (row, col).
    void set_block(std::size_t row, std::size_t col, const Matrix& block);

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
Vector operator*(const Matrix& m, std::span<const double> x);

/// Solves lhs * X = rhs by Gaussian elimination with partial pivoting.
/// Throws NonSquare / DimensionMismatch, or BadRange when lhs is singular.
Matrix solve(const Matrix& lhs, const Matrix& rhs);

// Vector helpers. All throw DimensionMismatch on length mismatch.
Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// x^T m x
double quadratic_form(const Matrix& m, std::span<const double> x);

struct EigenExtremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

/// All eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
/// Throws NonSquare, NotSymmetric (asymmetry > tol) or NonFinite.
Vector symmetric_eigenvalues(const Matrix& m, double tol = kDefaultTol);

EigenExtremes eig_extremes(const Matrix& m, double tol = kDefaultTol);

struct NsdVerdict {
    bool holds = false;
    double max_eig = 0.0;

    explicit operator bool() const noexcept { return holds; }
};

/// Negative semidefiniteness at tolerance: holds iff lambda_max(m) <= tol.
NsdVerdict nsd_check(const Matrix& m, double tol = kDefaultTol);

/// Largest singular value, sqrt(lambda_max(m^T m)).
double spectral_norm(const Matrix& m, double tol = kDefaultTol);

}  // namespace symabs
