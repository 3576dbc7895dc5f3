#pragma once

#include "imlab/linalg.hpp"

namespace imlab {

// Jointly Gaussian pair described by block covariance
//   [[A, B^T], [B, C]]
// with A = Cov(y1), C = Cov(y2), B = E[y2 y1^T]. A and C must be symmetric
// positive definite; the assembled matrix must be PSD (checked through the
// eigenvalues of C^{-1} B A^{-1} B^T, which must lie in [0, 1)).
struct BlockGaussianPair {
    Matrix a;
    Matrix b;
    Matrix c;
};

BlockGaussianPair make_block_gaussian_pair(Matrix a, Matrix b, Matrix c);

Matrix assemble_block_covariance(const BlockGaussianPair& pair);

// KL divergence between two zero-mean Gaussians:
// (1/2) (tr(S1^{-1} S0) - dim + ln |S1|/|S0|). S1 must be nonsingular
// and S0 positive definite.
double kl_gaussian_direct(const Matrix& sigma0, const Matrix& sigma1);

// Same divergence for the block pair against the independent (block-diagonal)
// Gaussian, evaluated as -(1/2) sum ln(1 - lambda_i(C^{-1} B A^{-1} B^T)).
double kl_block_independent(const BlockGaussianPair& pair);

// Mutual information of the jointly Gaussian pair; identical to the
// block-independent divergence.
double mi_gaussian_pair(const BlockGaussianPair& pair);

// Eigenvalues of C^{-1} B A^{-1} B^T via the symmetric similarity
// C^{-1/2} B A^{-1} B^T C^{-1/2}, descending.
std::vector<double> block_product_eigenvalues(const BlockGaussianPair& pair);

// Eigenvalues of the PSD product M1*M2 via the similarity M2^{1/2} M1 M2^{1/2}.
std::vector<double> psd_product_eigenvalues(const Matrix& m1, const Matrix& m2);

// Per-index bounds on the t-th largest eigenvalue of the product of two PSD
// matrices (t is 1-based, eigenvalues descending):
//   max_{i+j=t+n} l_i(M1) l_j(M2)  <=  l_t(M1 M2)  <=  min_{i+j=t+1} l_i(M1) l_j(M2).
struct EigenProductBounds {
    double lower = 0.0;
    double upper = 0.0;
};

EigenProductBounds eigenvalue_product_bounds(const Matrix& m1, const Matrix& m2, int t);

// Checks max eigenvalue of an MMSE matrix against the input covariance.
struct EigenBoundCheck {
    bool ok = false;
    double margin = 0.0;  // max_lambda(cov_x) - max_lambda(E)
};

EigenBoundCheck mmse_eigen_bound(const Matrix& mmse_matrix, const Matrix& cov_x, double tolerance = 0.0);

}  // namespace imlab
