#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imlab/channel.hpp"
#include "imlab/linalg.hpp"

namespace imlab {

// Finite scalar input distribution for the exact quadrature estimators.
struct Constellation {
    struct Point {
        double value = 0.0;
        double prob = 0.0;
    };
    std::vector<Point> points;

    double mean() const;
    double second_moment() const;
    double variance() const;
};

Constellation make_constellation(std::span<const double> values, std::span<const double> probs);
Constellation bpsk();
// unit-power 4-PAM: {-3,-1,1,3}/sqrt(5), equiprobable
Constellation pam4();

// M codewords of length n under the per-codeword power constraint
// ||x||^2/n <= 1, uniform prior.
struct Codebook {
    int n = 0;
    int M = 0;
    std::vector<double> words;  // M x n, row-major

    std::span<const double> word(int i) const {
        return std::span<const double>(words).subspan(static_cast<size_t>(i) * n, n);
    }
};

Codebook make_codebook(int n, std::vector<double> words);

// M = round(exp(n * rate_nats)) i.i.d. normal codewords projected onto the
// radius-sqrt(n) sphere. Deterministic in (n, rate, seed); M above 2^20 is a
// resource error.
Codebook generate_codebook(int n, double rate_nats, std::uint64_t seed);

// 2n words {+-rows of a Sylvester-Hadamard matrix}, entries +-1: the codebook
// covariance is bit-exactly the identity. n must be a power of two.
Codebook hadamard_pair_codebook(int n);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    std::uint64_t seed = 0;
};

struct McMatrixEstimate {
    Matrix value;
    Matrix std_error;  // entrywise standard errors
    long long samples = 0;
    std::uint64_t seed = 0;
};

// Posterior mean of the codeword given y = sqrt(gamma) x + noise, with
// log-weight normalization by max subtraction.
std::vector<double> conditional_mean(const Codebook& cb, std::span<const double> y, double gamma);

// Monte Carlo estimators. Sampling is chunked (4096 samples per chunk, one
// substream per chunk) and reduced in chunk order, so estimates are
// bit-identical for a fixed (seed, samples) regardless of thread count.
McEstimate mmse_codebook_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed,
                            int threads = 0);
McMatrixEstimate mmse_matrix_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed,
                                int threads = 0);
// Total mutual information in nats (bounded by ln M).
McEstimate mi_codebook_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed,
                          int threads = 0);

// Exact scalar estimators by Gauss-Hermite quadrature over the noise.
double mmse_scalar_quadrature(const Constellation& c, double gamma, int order = 61);
double mi_scalar_quadrature(const Constellation& c, double gamma, int order = 61);

// Convergence gate: evaluates at increasing orders (steps of 20, starting at
// start_order) until two consecutive rules agree within tol; NumericError
// when the order cap is reached first ("order too small").
double mmse_scalar_quadrature_gated(const Constellation& c, double gamma, double tol = 1e-10,
                                    int start_order = 61);
double mi_scalar_quadrature_gated(const Constellation& c, double gamma, double tol = 1e-10, int start_order = 61);

// One grid point of the derivative-vs-MMSE check. lhs is the central
// finite difference of the per-dimension mutual information, rhs is half the
// per-dimension MMSE; pass means |lhs - rhs| <= tol (+ 3 sigma for MC rows).
struct ImmseRow {
    double gamma = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

// The step actually used at gamma is h * max(1, gamma); it must stay below a
// quarter of the smallest grid spacing. Below the step the difference is
// one-sided (forward).
std::vector<ImmseRow> verify_immse(const Constellation& c, std::span<const double> grid, double h, double tol,
                                   int order = 61);
// Codebook variant couples I(gamma +- h) and the squared error through common
// random draws, so the reported std_error is that of the combined statistic.
std::vector<ImmseRow> verify_immse(const Codebook& cb, std::span<const double> grid, double h, double tol,
                                   long long samples, std::uint64_t seed, int threads = 0);

// Covariance of the uniform-over-codebook distribution (about its mean).
Matrix codebook_covariance(const Codebook& cb);
// max_i |lambda_i(Cov) - 1|
double spectral_deviation(const Codebook& cb);

struct SpectralDeviationRow {
    int n = 0;
    int M = 0;
    double mean_deviation = 0.0;
};

// Mean spectral deviation across `seeds` random codebooks per blocklength, at
// rate = rate_fraction * (1/2) ln(1 + snr1).
std::vector<SpectralDeviationRow> spectral_deviation_experiment(double snr1, double rate_fraction,
                                                                std::span<const int> n_list, int seeds,
                                                                std::uint64_t seed);

// Gaussian-surrogate mutual information (nats per dimension) between the two
// cascade outputs built from the codebook covariance; vanishes exactly for
// identity covariance.
double independence_surrogate_mi(const ChannelParams& p, double snr, double delta, const Codebook& cb);

struct IndependenceExperimentRow {
    int n = 0;
    int M = 0;
    double mean_surrogate_mi = 0.0;
};

// Mean surrogate MI across `seeds` random codebooks per blocklength. Codebook
// generation follows the same (seed, n, s) substreams as
// spectral_deviation_experiment, so the two experiments see identical books.
std::vector<IndependenceExperimentRow> independence_experiment(const ChannelParams& p, double snr, double delta,
                                                               double rate_fraction, std::span<const int> n_list,
                                                               int seeds, std::uint64_t seed);

struct TruncationResult {
    std::vector<double> clipped;
    bool all_within = false;
};

// Per-component clip: z_i if |z_i| < kappa, else kappa.
TruncationResult truncate_components(std::span<const double> z, double kappa);

// Dual-route check of one SNR increment with unit-power Gaussian z and x:
// the closed-form difference I(z; y(snr+delta)) - I(z; y(snr)) against the
// conditional mutual information evaluated through joint-Gaussian covariance
// determinants, plus the recombined-noise variance from the decomposition.
struct IncrementalGaussianCheck {
    double mi_difference = 0.0;
    double conditional_mi = 0.0;
    double var_nhat = 0.0;
};

IncrementalGaussianCheck incremental_gaussian_check(const ChannelParams& p, double snr, double delta);

}  // namespace imlab
