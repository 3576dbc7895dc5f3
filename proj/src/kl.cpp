#include "imlab/kl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

void check_block_shapes(const Matrix& a, const Matrix& b, const Matrix& c) {
    if (!a.is_square() || !c.is_square() || a.rows() != c.rows())
        throw InvalidArgument("block marginals must be square with equal dimension");
    if (b.rows() != a.rows() || b.cols() != a.rows())
        throw InvalidArgument("cross block dimension mismatch");
    const double scale = std::max({a.max_abs(), c.max_abs(), 1.0});
    if (a.asymmetry() > 1e-10 * scale || c.asymmetry() > 1e-10 * scale)
        throw InvalidArgument("block marginals must be symmetric");
}

}  // namespace

BlockGaussianPair make_block_gaussian_pair(Matrix a, Matrix b, Matrix c) {
    check_block_shapes(a, b, c);
    // nonsingularity of the marginals, per the formula's hypothesis
    cholesky_lower(a);
    cholesky_lower(c);
    return BlockGaussianPair{std::move(a), std::move(b), std::move(c)};
}

Matrix assemble_block_covariance(const BlockGaussianPair& pair) {
    const int n = pair.a.rows();
    Matrix s(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            s(i, j) = pair.a(i, j);
            s(n + i, n + j) = pair.c(i, j);
            s(n + i, j) = pair.b(i, j);
            s(j, n + i) = pair.b(i, j);
        }
    }
    return s;
}

double kl_gaussian_direct(const Matrix& sigma0, const Matrix& sigma1) {
    if (!sigma0.is_square() || !sigma1.is_square() || sigma0.rows() != sigma1.rows())
        throw InvalidArgument("covariances must be square with equal dimension");
    const int n = sigma0.rows();

    Matrix l1;
    try {
        l1 = cholesky_lower(sigma1);
    } catch (const NumericError&) {
        throw NumericError("sigma1 is singular or not positive definite");
    }
    Matrix l0;
    try {
        l0 = cholesky_lower(sigma0);
    } catch (const NumericError&) {
        throw NumericError("sigma0 has a non-positive determinant");
    }

    const double tr = trace(solve_with_cholesky(l1, sigma0));
    const double log_det_ratio = log_det_from_cholesky(l1) - log_det_from_cholesky(l0);
    return 0.5 * (tr - n + log_det_ratio);
}

std::vector<double> block_product_eigenvalues(const BlockGaussianPair& pair) {
    const Matrix c_isqrt = inverse_sqrt_spd(pair.c);
    const Matrix a_inv = inverse_spd(pair.a);
    Matrix m = c_isqrt * pair.b * a_inv * pair.b.transposed() * c_isqrt;
    return sym_eigenvalues(m.symmetrized());
}

double kl_block_independent(const BlockGaussianPair& pair) {
    const std::vector<double> lambdas = block_product_eigenvalues(pair);
    double sum = 0.0;
    for (double lam : lambdas) {
        if (lam >= 1.0 - 1e-12) throw NumericError("assembled covariance not positive definite");
        if (lam < -1e-10) throw NumericError("cross-block eigenvalue is negative beyond round-off");
        sum += -0.5 * std::log1p(-std::max(lam, 0.0));
    }
    return sum;
}

double mi_gaussian_pair(const BlockGaussianPair& pair) { return kl_block_independent(pair); }

std::vector<double> psd_product_eigenvalues(const Matrix& m1, const Matrix& m2) {
    if (!m1.is_square() || !m2.is_square() || m1.rows() != m2.rows())
        throw InvalidArgument("product eigenvalues require equal square matrices");
    SymEigen e2 = sym_eigen(m2);
    const int n = m2.rows();
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) {
        if (e2.values[i] < -1e-10 * std::max(m2.max_abs(), 1.0))
            throw NumericError("matrix is not positive semi-definite");
        d(i, i) = std::sqrt(std::max(e2.values[i], 0.0));
    }
    const Matrix sqrt2 = e2.vectors * d * e2.vectors.transposed();
    Matrix m = sqrt2 * m1 * sqrt2;
    return sym_eigenvalues(m.symmetrized());
}

EigenProductBounds eigenvalue_product_bounds(const Matrix& m1, const Matrix& m2, int t) {
    if (!m1.is_square() || !m2.is_square() || m1.rows() != m2.rows())
        throw InvalidArgument("eigenvalue bounds require equal square matrices");
    const int n = m1.rows();
    if (t < 1 || t > n) throw InvalidArgument("index t must be in [1, n]");

    const std::vector<double> l1 = sym_eigenvalues(m1);
    const std::vector<double> l2 = sym_eigenvalues(m2);

    EigenProductBounds out;
    bool have_lower = false;
    bool have_upper = false;
    for (int i = 1; i <= n; ++i) {
        const int j_low = t + n - i;
        if (j_low >= 1 && j_low <= n) {
            const double v = l1[i - 1] * l2[j_low - 1];
            if (!have_lower || v > out.lower) out.lower = v;
            have_lower = true;
        }
        const int j_up = t + 1 - i;
        if (j_up >= 1 && j_up <= n) {
            const double v = l1[i - 1] * l2[j_up - 1];
            if (!have_upper || v < out.upper) out.upper = v;
            have_upper = true;
        }
    }
    if (!have_lower || !have_upper) throw NumericError("no admissible index pairing for bounds");
    return out;
}

EigenBoundCheck mmse_eigen_bound(const Matrix& mmse_matrix, const Matrix& cov_x, double tolerance) {
    if (mmse_matrix.rows() != cov_x.rows() || !mmse_matrix.is_square() || !cov_x.is_square())
        throw InvalidArgument("eigen bound check requires equal square matrices");
    const double max_e = sym_eigenvalues(mmse_matrix).front();
    const double max_cov = sym_eigenvalues(cov_x).front();
    EigenBoundCheck out;
    out.margin = max_cov - max_e;
    out.ok = max_e <= max_cov + tolerance;
    return out;
}

}  // namespace imlab
