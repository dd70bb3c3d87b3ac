#include "symabs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    }
}

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": length " +
                                                      std::to_string(a.size()) + " vs " +
                                                      std::to_string(b.size()));
    }
}

void require_square(const Matrix& m) {
    if (!m.is_square()) {
        throw Error(ErrorCode::NonSquare,
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const Matrix& m) {
    if (!m.all_finite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
}

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

// Cyclic Jacobi on a symmetric copy. Quadratically convergent; for the
// matrix sizes used here a handful of sweeps reaches machine precision.
Vector jacobi_eigenvalues(Matrix a) {
    const std::size_t n = a.rows();
    const double scale = frobenius_norm(a);
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = arp - s * (arq + tau * arp);
                    a(p, r) = a(r, p);
                    a(r, q) = arq + s * (arp - tau * arq);
                    a(q, r) = a(r, q);
                }
            }
        }
    }

    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(*this);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& row : rows) {
        if (row.size() != m.cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
        m.data_.insert(m.data_.end(), row.begin(), row.end());
    }
    require_finite(m);
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::asymmetry() const {
    require_square(*this);
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

void Matrix::set_block(std::size_t row, std::size_t col, const Matrix& block) {
    if (row + block.rows() > rows_ || col + block.cols() > cols_)
        throw Error(ErrorCode::DimensionMismatch, "block does not fit");
    for (std::size_t i = 0; i < block.rows(); ++i)
        for (std::size_t j = 0; j < block.cols(); ++j) (*this)(row + i, col + j) = block(i, j);
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "matrix add");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "matrix subtract");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix product: inner dimensions " + std::to_string(lhs.cols()) + " vs " +
                        std::to_string(rhs.rows()));
    }
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

Vector operator*(const Matrix& m, std::span<const double> x) {
    if (m.cols() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix-vector product: " + std::to_string(m.cols()) + " vs " +
                        std::to_string(x.size()));
    }
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * x[j];
    return out;
}

Matrix solve(const Matrix& lhs, const Matrix& rhs) {
    require_square(lhs);
    if (lhs.rows() != rhs.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: row mismatch");
    const std::size_t n = lhs.rows();
    Matrix a = lhs;
    Matrix b = rhs;
    const double scale = std::max(1.0, frobenius_norm(lhs));

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) <= 1e-14 * scale)
            throw Error(ErrorCode::BadRange, "solve: matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(pivot, j));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= f * b(col, j);
        }
    }
    Matrix x(n, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = n; i-- > 0;) {
            double s = b(i, j);
            for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
            x(i, j) = s / a(i, i);
        }
    }
    return x;
}

Vector add(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "vector add");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "vector subtract");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double quadratic_form(const Matrix& m, std::span<const double> x) {
    return dot(x, m * x);
}

Vector symmetric_eigenvalues(const Matrix& m, double tol) {
    require_square(m);
    require_finite(m);
    const double asym = m.asymmetry();
    if (asym > tol) {
        throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym) +
                                                 " exceeds tolerance " + std::to_string(tol));
    }
    if (m.rows() == 0) return {};
    // Average the off-diagonal pairs so the rotations act on an exactly
    // symmetric matrix.
    Matrix sym = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            sym(i, j) = v;
            sym(j, i) = v;
        }
    return jacobi_eigenvalues(std::move(sym));
}

EigenExtremes eig_extremes(const Matrix& m, double tol) {
    const Vector eig = symmetric_eigenvalues(m, tol);
    if (eig.empty()) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
    return {eig.front(), eig.back()};
}

NsdVerdict nsd_check(const Matrix& m, double tol) {
    const double max_eig = eig_extremes(m, tol).lambda_max;
    return {max_eig <= tol, max_eig};
}

double spectral_norm(const Matrix& m, double tol) {
    require_finite(m);
    if (m.empty()) return 0.0;
    // Gram matrix of the smaller side has the same nonzero spectrum.
    const Matrix gram = m.rows() < m.cols() ? m * m.transpose() : m.transpose() * m;
    const double top = eig_extremes(gram, std::max(tol, 1e-12 * frobenius_norm(gram))).lambda_max;
    return std::sqrt(std::max(0.0, top));
}

}  // namespace symabs
