/* Public C interface of the interference-channel I-MMSE laboratory.
 *
 * All functions return IMLAB_OK (0) on success or a negative status code;
 * results are written through out-parameters. imlab_last_error() returns a
 * thread-local message for the most recent failure on the calling thread.
 * Matrices are dense row-major double arrays. Information is in nats.
 */
#ifndef IMLAB_H
#define IMLAB_H

#include <stdint.h>

#if defined(_WIN32)
#define IMLAB_API __declspec(dllexport)
#else
#define IMLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
    IMLAB_OK = 0,
    IMLAB_ERR_INVALID = -1,  /* bad arguments (null pointers, shape mismatch) */
    IMLAB_ERR_DOMAIN = -2,   /* input outside the mathematical domain */
    IMLAB_ERR_RANGE = -3,    /* input outside an admissible interval */
    IMLAB_ERR_NUMERIC = -4,  /* numeric failure (singular matrix, no convergence) */
    IMLAB_ERR_RESOURCE = -5  /* request exceeds a resource cap */
};

IMLAB_API const char* imlab_strerror(int code);
IMLAB_API const char* imlab_last_error(void);
IMLAB_API unsigned imlab_abi_version(void);

/* ---- channel model ---- */

typedef struct {
    double snr1;
    double snr2;
    double a;
} imlab_channel_params;

typedef struct {
    double snr;
    double delta;
    double alpha;
    double sigma1_sq;
    double sigma2_sq;
    double var_nhat;
} imlab_increment;

IMLAB_API int imlab_gamma_prime(const imlab_channel_params* p, double gamma, double* out);
IMLAB_API int imlab_d_gamma_prime(const imlab_channel_params* p, double gamma, double* out);
IMLAB_API int imlab_admissible_snr_limit(const imlab_channel_params* p, double* out);
IMLAB_API int imlab_incremental_decomposition(const imlab_channel_params* p, double snr, double delta,
                                              imlab_increment* out);

/* ---- closed-form analytics ---- */

enum { IMLAB_REGIME_R1 = 1, IMLAB_REGIME_R2 = 2, IMLAB_REGIME_R3 = 3 };

IMLAB_API int imlab_mi_gaussian_interference(const imlab_channel_params* p, double gamma, double* out);
IMLAB_API int imlab_d_mi_gaussian_interference(const imlab_channel_params* p, double gamma, double* out);
IMLAB_API int imlab_mi_regime(const imlab_channel_params* p, double gamma, int* out_regime);
IMLAB_API int imlab_mi_regime_branch(const imlab_channel_params* p, int regime, double gamma, double* out);
IMLAB_API int imlab_conditional_mi_given_x(const imlab_channel_params* p, double gamma, double* out);
IMLAB_API int imlab_mmse_gaussian(double power, double gamma, double* out);
/* predicted dI/dgamma on [0,1) from the Gaussian-z MMSE profile of the given power */
IMLAB_API int imlab_d_mi_weak_from_gaussian_z(const imlab_channel_params* p, double gamma, double z_power,
                                              double* out);

typedef struct {
    double snr_design;
    double power;
} imlab_good_code_profile;

IMLAB_API int imlab_mi_good_code(const imlab_good_code_profile* c, double gamma, double* out);
IMLAB_API int imlab_mmse_good_code(const imlab_good_code_profile* c, double gamma, double* out);
IMLAB_API int imlab_fisher_composite_noise_gaussian(double power, double delta, double alpha, double* out);

/* Gaussian-instantiation check of one SNR increment (unit powers). */
typedef struct {
    double mi_difference;
    double conditional_mi;
    double var_nhat;
} imlab_increment_check;

IMLAB_API int imlab_incremental_gaussian_check(const imlab_channel_params* p, double snr, double delta,
                                               imlab_increment_check* out);

/* ---- Gaussian KL divergences and eigenvalue tools ---- */

IMLAB_API int imlab_sym_eigenvalues(int n, const double* s, double* out_descending);
IMLAB_API int imlab_kl_gaussian_direct(int dim, const double* sigma0, const double* sigma1, double* out);
/* Block pair (A, B, C): A = Cov(y1), C = Cov(y2), B = E[y2 y1^T], each n x n. */
IMLAB_API int imlab_kl_block_independent(int n, const double* a, const double* b, const double* c, double* out);
/* Both routes at once: the blockwise eigenvalue form and the assembled direct form. */
IMLAB_API int imlab_kl_block_both(int n, const double* a, const double* b, const double* c, double* out_blockwise,
                                  double* out_direct);

/* ---- finite-n estimation lab ---- */

typedef struct imlab_codebook imlab_codebook;
typedef struct imlab_constellation imlab_constellation;

typedef struct {
    double value;
    double std_error;
    long long samples;
} imlab_estimate;

typedef struct {
    double gamma;
    double lhs;      /* finite difference of per-dimension mutual information */
    double rhs;      /* half the per-dimension MMSE */
    double abs_diff;
    double std_error;
    int pass;
} imlab_immse_row;

IMLAB_API int imlab_codebook_generate(int n, double rate_nats, uint64_t seed, imlab_codebook** out);
IMLAB_API int imlab_codebook_create(int n, int m, const double* words, imlab_codebook** out);
IMLAB_API void imlab_codebook_free(imlab_codebook* cb);
IMLAB_API int imlab_codebook_shape(const imlab_codebook* cb, int* out_m, int* out_n);
IMLAB_API int imlab_codebook_spectral_deviation(const imlab_codebook* cb, double* out);
IMLAB_API int imlab_codebook_mmse_mc(const imlab_codebook* cb, double gamma, long long samples, uint64_t seed,
                                     int threads, imlab_estimate* out);
IMLAB_API int imlab_codebook_mi_mc(const imlab_codebook* cb, double gamma, long long samples, uint64_t seed,
                                   int threads, imlab_estimate* out);
IMLAB_API int imlab_codebook_verify_immse(const imlab_codebook* cb, const double* grid, int grid_len, double h,
                                          double tol, long long samples, uint64_t seed, int threads,
                                          imlab_immse_row* out_rows);
IMLAB_API int imlab_independence_surrogate_mi(const imlab_channel_params* p, double snr, double delta,
                                              const imlab_codebook* cb, double* out);

/* Per-blocklength experiments over `seeds` random codebooks at
 * rate = rate_fraction * (1/2) ln(1 + snr1); both use identical codebooks for
 * the same (seed, n_list, seeds). out_m and the result array hold one entry
 * per blocklength. */
IMLAB_API int imlab_spectral_deviation_experiment(double snr1, double rate_fraction, const int* n_list, int count,
                                                  int seeds, uint64_t seed, int* out_m, double* out_mean_dev);
IMLAB_API int imlab_independence_experiment(const imlab_channel_params* p, double snr, double delta,
                                            double rate_fraction, const int* n_list, int count, int seeds,
                                            uint64_t seed, int* out_m, double* out_mean_mi);

IMLAB_API int imlab_constellation_create(int count, const double* values, const double* probs,
                                         imlab_constellation** out);
IMLAB_API int imlab_constellation_bpsk(imlab_constellation** out);
IMLAB_API int imlab_constellation_pam4(imlab_constellation** out);
IMLAB_API void imlab_constellation_free(imlab_constellation* c);
IMLAB_API int imlab_mmse_quadrature(const imlab_constellation* c, double gamma, int order, double* out);
IMLAB_API int imlab_mi_quadrature(const imlab_constellation* c, double gamma, int order, double* out);
IMLAB_API int imlab_constellation_verify_immse(const imlab_constellation* c, const double* grid, int grid_len,
                                               double h, double tol, int order, imlab_immse_row* out_rows);

/* ---- multi-user rate results ---- */

typedef struct {
    double snr1;
    double snr2;
    double snr_z;
    double a;
} imlab_mac_params;

typedef struct {
    double snr1;
    double snr2;
    double snr3;
} imlab_cascade_params;

IMLAB_API int imlab_mac_mmse_threshold(const imlab_mac_params* p, double* out);
/* out_rates = {R1, R2, Rz} */
IMLAB_API int imlab_mac_weak_boundary(const imlab_mac_params* p, double beta, double out_rates[3]);
IMLAB_API int imlab_intermediate_node_limit(const imlab_cascade_params* p, double a2, double a3, double* out);
/* out_rates = {R1, R2, R3} */
IMLAB_API int imlab_cascade_boundary(const imlab_cascade_params* p, double a, double beta, double out_rates[3]);
/* out_bounds = {sum, r2_bound, r3_bound} */
IMLAB_API int imlab_cascade_bounds(const imlab_cascade_params* p, double a, double out_bounds[3]);

#ifdef __cplusplus
}
#endif

#endif /* IMLAB_H */
