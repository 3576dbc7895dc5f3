#include "imlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imlab/errors.hpp"

namespace imlab {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw InvalidArgument("matrix dimensions must be non-negative");
    data_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows < 0 || cols < 0 || data_.size() != static_cast<size_t>(rows) * cols)
        throw InvalidArgument("matrix data size does not match dimensions");
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double Matrix::asymmetry() const {
    if (!is_square()) throw InvalidArgument("asymmetry requires a square matrix");
    double m = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

Matrix Matrix::symmetrized() const {
    if (!is_square()) throw InvalidArgument("symmetrized requires a square matrix");
    Matrix s(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidArgument("matrix addition dimension mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidArgument("matrix subtraction dimension mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InvalidArgument("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
        for (int k = 0; k < a.cols_; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

double trace(const Matrix& m) {
    if (!m.is_square()) throw InvalidArgument("trace requires a square matrix");
    double t = 0.0;
    for (int i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

namespace {

void check_symmetric_input(const Matrix& s) {
    if (!s.is_square()) throw InvalidArgument("eigendecomposition requires a square matrix");
    if (!s.all_finite()) throw NumericError("eigendecomposition input has non-finite entries");
    const double scale = std::max(s.max_abs(), 1.0);
    if (s.asymmetry() > 1e-10 * scale) throw InvalidArgument("matrix is not symmetric to 1e-10");
}

}  // namespace

SymEigen sym_eigen(const Matrix& s_in) {
    check_symmetric_input(s_in);
    const int n = s_in.rows();
    Matrix a = s_in.symmetrized();
    Matrix v = Matrix::identity(n);

    SymEigen out;
    if (n == 0) {
        out.vectors = v;
        return out;
    }

    const double norm = a.frobenius_norm();
    const double tol = 1e-12 * norm;
    const long long cap = 100LL * n * n;
    long long rotations = 0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    while (norm > 0.0 && off_norm() > tol) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                if (++rotations > cap)
                    throw NumericError("jacobi eigensolver exceeded rotation cap (" + std::to_string(cap) + ")");

                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = sn * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> sym_eigenvalues(const Matrix& s) { return sym_eigen(s).values; }

Matrix cholesky_lower(const Matrix& a) {
    if (!a.is_square()) throw InvalidArgument("cholesky requires a square matrix");
    if (!a.all_finite()) throw NumericError("cholesky input has non-finite entries");
    const int n = a.rows();
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw NumericError("matrix is not positive definite (cholesky pivot " +
                                           std::to_string(j) + " = " + std::to_string(d) + ")");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

double log_det_from_cholesky(const Matrix& l) {
    double s = 0.0;
    for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

Matrix solve_with_cholesky(const Matrix& l, const Matrix& b) {
    if (l.rows() != b.rows()) throw InvalidArgument("solve dimension mismatch");
    const int n = l.rows();
    const int m = b.cols();
    Matrix x = b;
    // forward: L y = b
    for (int c = 0; c < m; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = x(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        // back: L^T x = y
        for (int i = n - 1; i >= 0; --i) {
            double s = x(i, c);
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

Matrix inverse_spd(const Matrix& a) {
    return solve_with_cholesky(cholesky_lower(a), Matrix::identity(a.rows()));
}

Matrix inverse_sqrt_spd(const Matrix& a) {
    SymEigen e = sym_eigen(a);
    const int n = a.rows();
    for (double lam : e.values)
        if (!(lam > 0.0)) throw NumericError("inverse sqrt requires a positive definite matrix");
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = 1.0 / std::sqrt(e.values[i]);
    return e.vectors * d * e.vectors.transposed();
}

}  // namespace imlab
