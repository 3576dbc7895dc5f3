#pragma once

#include <span>
#include <vector>

namespace imlab {

// Dense row-major matrix. Sized for desk-scale problems (dim <= a few hundred);
// everything is value-semantic and safe to share across threads once built.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, std::vector<double> data);

    static Matrix identity(int n);
    static Matrix diagonal(std::span<const double> d);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Matrix transposed() const;
    bool is_square() const noexcept { return rows_ == cols_; }
    bool all_finite() const noexcept;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;
    // max |M(i,j) - M(j,i)| over the square part
    double asymmetry() const;
    Matrix symmetrized() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

double trace(const Matrix& m);

struct SymEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi rotations on the symmetrized input. Converges when the
// off-diagonal Frobenius norm falls below 1e-12 of the matrix norm; more than
// 100*n^2 rotations is a NumericError, not a silent result.
SymEigen sym_eigen(const Matrix& s);

// Eigenvalues of (S + S^T)/2, descending. Input must be symmetric to 1e-10
// (relative) and finite.
std::vector<double> sym_eigenvalues(const Matrix& s);

// Cholesky factor L (lower) of a symmetric positive definite matrix.
// NumericError if a pivot is not strictly positive.
Matrix cholesky_lower(const Matrix& a);
double log_det_from_cholesky(const Matrix& l);

// X = A^{-1} B via an externally computed Cholesky factor of A.
Matrix solve_with_cholesky(const Matrix& l, const Matrix& b);
Matrix inverse_spd(const Matrix& a);
// A^{-1/2} through the eigendecomposition; requires strictly positive spectrum.
Matrix inverse_sqrt_spd(const Matrix& a);

}  // namespace imlab
