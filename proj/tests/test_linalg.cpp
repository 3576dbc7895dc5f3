#include <doctest.h>

#include <cmath>

#include "imlab/errors.hpp"
#include "imlab/linalg.hpp"
#include "imlab/rng.hpp"

#ifdef IMLAB_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace imlab;

namespace {

Matrix random_symmetric(int n, Rng& rng, double scale = 1.0) {
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = scale * rng.normal();
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

Matrix random_psd(int n, Rng& rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    return g * g.transposed();
}

}  // namespace

TEST_CASE("eigenvalues of identity and diagonal matrices") {
    const auto id = sym_eigenvalues(Matrix::identity(3));
    for (double v : id) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const double d[] = {3.0, 1.0, 2.0};
    const auto vals = sym_eigenvalues(Matrix::diagonal(d));
    CHECK(vals[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(vals[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eigenpairs satisfy the residual bound") {
    Rng rng(11);
    for (int n : {2, 5, 8, 12}) {
        const Matrix s = random_symmetric(n, rng, 2.0);
        const SymEigen e = sym_eigen(s);
        const double norm = s.frobenius_norm();
        for (int k = 0; k < n; ++k) {
            double resid = 0.0;
            for (int i = 0; i < n; ++i) {
                double sv = 0.0;
                for (int j = 0; j < n; ++j) sv += s(i, j) * e.vectors(j, k);
                const double r = sv - e.values[k] * e.vectors(i, k);
                resid += r * r;
            }
            CHECK(std::sqrt(resid) <= 1e-9 * norm);
        }
        for (int k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
}

#ifdef IMLAB_HAVE_EIGEN
TEST_CASE("eigenvalues match an independent solver") {
    Rng rng(29);
    for (int n : {3, 6, 10}) {
        const Matrix s = random_symmetric(n, rng);
        const auto mine = sym_eigenvalues(s);

        Eigen::MatrixXd es(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) es(i, j) = s(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(es);
        for (int k = 0; k < n; ++k) {
            // Eigen sorts ascending
            CHECK(mine[k] == doctest::Approx(solver.eigenvalues()(n - 1 - k)).epsilon(1e-9));
        }
    }
}
#endif

TEST_CASE("eigensolver rejects bad input") {
    Matrix bad(2, 2);
    bad(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(sym_eigenvalues(bad), InvalidArgument);

    Matrix nan(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(sym_eigenvalues(nan), NumericError);
}

TEST_CASE("cholesky factorization and solves") {
    Rng rng(5);
    const int n = 6;
    Matrix a = random_psd(n, rng);
    for (int i = 0; i < n; ++i) a(i, i) += 0.5;

    const Matrix l = cholesky_lower(a);
    const Matrix reconstructed = l * l.transposed();
    CHECK((reconstructed - a).max_abs() <= 1e-10 * a.max_abs());

    const Matrix inv = inverse_spd(a);
    const Matrix prod = inv * a;
    CHECK((prod - Matrix::identity(n)).max_abs() <= 1e-9);

    Matrix not_pd = Matrix::identity(2);
    not_pd(0, 0) = -1.0;
    CHECK_THROWS_AS(cholesky_lower(not_pd), NumericError);
}

TEST_CASE("inverse square root of an SPD matrix") {
    Rng rng(17);
    const int n = 5;
    Matrix a = random_psd(n, rng);
    for (int i = 0; i < n; ++i) a(i, i) += 0.5;
    const Matrix r = inverse_sqrt_spd(a);
    const Matrix should_be_identity = r * a * r;
    CHECK((should_be_identity - Matrix::identity(n)).max_abs() <= 1e-9);
}
