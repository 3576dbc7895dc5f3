#include "imlab.h"

#include <cstring>
#include <new>
#include <string>

#include "imlab/channel.hpp"
#include "imlab/errors.hpp"
#include "imlab/estimator.hpp"
#include "imlab/gaussian.hpp"
#include "imlab/kl.hpp"
#include "imlab/rate_regions.hpp"

struct imlab_codebook {
    imlab::Codebook cb;
};

struct imlab_constellation {
    imlab::Constellation c;
};

namespace {

thread_local std::string g_last_error;

int code_of(const imlab::Error& e) {
    switch (e.code()) {
        case imlab::Errc::invalid_argument:
            return IMLAB_ERR_INVALID;
        case imlab::Errc::domain:
            return IMLAB_ERR_DOMAIN;
        case imlab::Errc::range:
            return IMLAB_ERR_RANGE;
        case imlab::Errc::numeric:
            return IMLAB_ERR_NUMERIC;
        case imlab::Errc::resource:
            return IMLAB_ERR_RESOURCE;
    }
    return IMLAB_ERR_INVALID;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return IMLAB_OK;
    } catch (const imlab::Error& e) {
        g_last_error = e.what();
        return code_of(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return IMLAB_ERR_RESOURCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return IMLAB_ERR_NUMERIC;
    }
}

imlab::ChannelParams to_params(const imlab_channel_params* p) {
    return imlab::make_channel_params(p->snr1, p->snr2, p->a);
}

imlab::Matrix to_matrix(int rows, int cols, const double* data) {
    return imlab::Matrix(rows, cols, std::vector<double>(data, data + static_cast<size_t>(rows) * cols));
}

bool any_null(const void* a) { return a == nullptr; }
template <typename... Rest>
bool any_null(const void* a, Rest... rest) {
    return a == nullptr || any_null(rest...);
}

int null_error() {
    g_last_error = "null pointer argument";
    return IMLAB_ERR_INVALID;
}

void copy_rows(const std::vector<imlab::ImmseRow>& rows, imlab_immse_row* out_rows) {
    for (size_t i = 0; i < rows.size(); ++i) {
        out_rows[i] = imlab_immse_row{rows[i].gamma,    rows[i].lhs,       rows[i].rhs,
                                      rows[i].abs_diff, rows[i].std_error, rows[i].pass ? 1 : 0};
    }
}

}  // namespace

extern "C" {

const char* imlab_strerror(int code) {
    switch (code) {
        case IMLAB_OK:
            return "ok";
        case IMLAB_ERR_INVALID:
            return "invalid argument";
        case IMLAB_ERR_DOMAIN:
            return "domain error";
        case IMLAB_ERR_RANGE:
            return "admissible-range error";
        case IMLAB_ERR_NUMERIC:
            return "numeric error";
        case IMLAB_ERR_RESOURCE:
            return "resource limit exceeded";
        default:
            return "unknown status";
    }
}

const char* imlab_last_error(void) { return g_last_error.c_str(); }

unsigned imlab_abi_version(void) { return 1; }

int imlab_gamma_prime(const imlab_channel_params* p, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::gamma_prime(to_params(p), gamma); });
}

int imlab_d_gamma_prime(const imlab_channel_params* p, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::d_gamma_prime(to_params(p), gamma); });
}

int imlab_admissible_snr_limit(const imlab_channel_params* p, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::admissible_snr_limit(to_params(p)); });
}

int imlab_incremental_decomposition(const imlab_channel_params* p, double snr, double delta, imlab_increment* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] {
        const auto d = imlab::incremental_decomposition(to_params(p), snr, delta);
        *out = imlab_increment{d.snr, d.delta, d.alpha, d.sigma1_sq, d.sigma2_sq, d.var_nhat};
    });
}

int imlab_mi_gaussian_interference(const imlab_channel_params* p, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::mi_gaussian_interference(to_params(p), gamma); });
}

int imlab_d_mi_gaussian_interference(const imlab_channel_params* p, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::d_mi_gaussian_interference(to_params(p), gamma); });
}

int imlab_mi_regime(const imlab_channel_params* p, double gamma, int* out_regime) {
    if (any_null(p, out_regime)) return null_error();
    return guarded([&] { *out_regime = static_cast<int>(imlab::mi_regime(to_params(p), gamma)); });
}

int imlab_mi_regime_branch(const imlab_channel_params* p, int regime, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] {
        if (regime < 1 || regime > 3) throw imlab::InvalidArgument("regime must be 1, 2 or 3");
        *out = imlab::mi_regime_branch(to_params(p), static_cast<imlab::Regime>(regime), gamma);
    });
}

int imlab_conditional_mi_given_x(const imlab_channel_params* p, double gamma, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] { *out = imlab::conditional_mi_given_x(to_params(p), gamma); });
}

int imlab_mmse_gaussian(double power, double gamma, double* out) {
    if (any_null(out)) return null_error();
    return guarded([&] { *out = imlab::mmse_gaussian(power, gamma); });
}

int imlab_d_mi_weak_from_gaussian_z(const imlab_channel_params* p, double gamma, double z_power, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] {
        *out = imlab::d_mi_from_mmse_weak(to_params(p), gamma,
                                          [z_power](double g) { return imlab::mmse_gaussian(z_power, g); });
    });
}

int imlab_mi_good_code(const imlab_good_code_profile* c, double gamma, double* out) {
    if (any_null(c, out)) return null_error();
    return guarded([&] { *out = imlab::mi_good_code(imlab::make_good_code_profile(c->snr_design, c->power), gamma); });
}

int imlab_mmse_good_code(const imlab_good_code_profile* c, double gamma, double* out) {
    if (any_null(c, out)) return null_error();
    return guarded(
        [&] { *out = imlab::mmse_good_code(imlab::make_good_code_profile(c->snr_design, c->power), gamma); });
}

int imlab_fisher_composite_noise_gaussian(double power, double delta, double alpha, double* out) {
    if (any_null(out)) return null_error();
    return guarded([&] { *out = imlab::fisher_composite_noise_gaussian(power, delta, alpha); });
}

int imlab_incremental_gaussian_check(const imlab_channel_params* p, double snr, double delta,
                                     imlab_increment_check* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] {
        const auto c = imlab::incremental_gaussian_check(to_params(p), snr, delta);
        *out = imlab_increment_check{c.mi_difference, c.conditional_mi, c.var_nhat};
    });
}

int imlab_sym_eigenvalues(int n, const double* s, double* out_descending) {
    if (any_null(s, out_descending)) return null_error();
    return guarded([&] {
        if (n < 1) throw imlab::InvalidArgument("dimension must be positive");
        const auto vals = imlab::sym_eigenvalues(to_matrix(n, n, s));
        std::memcpy(out_descending, vals.data(), sizeof(double) * vals.size());
    });
}

int imlab_kl_gaussian_direct(int dim, const double* sigma0, const double* sigma1, double* out) {
    if (any_null(sigma0, sigma1, out)) return null_error();
    return guarded([&] {
        if (dim < 1) throw imlab::InvalidArgument("dimension must be positive");
        *out = imlab::kl_gaussian_direct(to_matrix(dim, dim, sigma0), to_matrix(dim, dim, sigma1));
    });
}

int imlab_kl_block_independent(int n, const double* a, const double* b, const double* c, double* out) {
    if (any_null(a, b, c, out)) return null_error();
    return guarded([&] {
        if (n < 1) throw imlab::InvalidArgument("dimension must be positive");
        *out = imlab::kl_block_independent(
            imlab::make_block_gaussian_pair(to_matrix(n, n, a), to_matrix(n, n, b), to_matrix(n, n, c)));
    });
}

int imlab_kl_block_both(int n, const double* a, const double* b, const double* c, double* out_blockwise,
                        double* out_direct) {
    if (any_null(a, b, c, out_blockwise, out_direct)) return null_error();
    return guarded([&] {
        if (n < 1) throw imlab::InvalidArgument("dimension must be positive");
        const auto pair =
            imlab::make_block_gaussian_pair(to_matrix(n, n, a), to_matrix(n, n, b), to_matrix(n, n, c));
        *out_blockwise = imlab::kl_block_independent(pair);
        imlab::Matrix assembled = imlab::assemble_block_covariance(pair);
        imlab::Matrix independent(2 * n, 2 * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                independent(i, j) = pair.a(i, j);
                independent(n + i, n + j) = pair.c(i, j);
            }
        *out_direct = imlab::kl_gaussian_direct(assembled, independent);
    });
}

int imlab_codebook_generate(int n, double rate_nats, uint64_t seed, imlab_codebook** out) {
    if (any_null(out)) return null_error();
    return guarded([&] { *out = new imlab_codebook{imlab::generate_codebook(n, rate_nats, seed)}; });
}

int imlab_codebook_create(int n, int m, const double* words, imlab_codebook** out) {
    if (any_null(words, out)) return null_error();
    return guarded([&] {
        if (n < 1 || m < 1) throw imlab::InvalidArgument("codebook dimensions must be positive");
        std::vector<double> data(words, words + static_cast<size_t>(m) * n);
        *out = new imlab_codebook{imlab::make_codebook(n, std::move(data))};
    });
}

void imlab_codebook_free(imlab_codebook* cb) { delete cb; }

int imlab_codebook_shape(const imlab_codebook* cb, int* out_m, int* out_n) {
    if (any_null(cb, out_m, out_n)) return null_error();
    *out_m = cb->cb.M;
    *out_n = cb->cb.n;
    return IMLAB_OK;
}

int imlab_codebook_spectral_deviation(const imlab_codebook* cb, double* out) {
    if (any_null(cb, out)) return null_error();
    return guarded([&] { *out = imlab::spectral_deviation(cb->cb); });
}

int imlab_codebook_mmse_mc(const imlab_codebook* cb, double gamma, long long samples, uint64_t seed, int threads,
                           imlab_estimate* out) {
    if (any_null(cb, out)) return null_error();
    return guarded([&] {
        const auto e = imlab::mmse_codebook_mc(cb->cb, gamma, samples, seed, threads);
        *out = imlab_estimate{e.value, e.std_error, e.samples};
    });
}

int imlab_codebook_mi_mc(const imlab_codebook* cb, double gamma, long long samples, uint64_t seed, int threads,
                         imlab_estimate* out) {
    if (any_null(cb, out)) return null_error();
    return guarded([&] {
        const auto e = imlab::mi_codebook_mc(cb->cb, gamma, samples, seed, threads);
        *out = imlab_estimate{e.value, e.std_error, e.samples};
    });
}

int imlab_codebook_verify_immse(const imlab_codebook* cb, const double* grid, int grid_len, double h, double tol,
                                long long samples, uint64_t seed, int threads, imlab_immse_row* out_rows) {
    if (any_null(cb, grid, out_rows)) return null_error();
    return guarded([&] {
        if (grid_len < 1) throw imlab::InvalidArgument("grid must be non-empty");
        const auto rows = imlab::verify_immse(cb->cb, std::span<const double>(grid, grid_len), h, tol, samples,
                                              seed, threads);
        copy_rows(rows, out_rows);
    });
}

int imlab_independence_surrogate_mi(const imlab_channel_params* p, double snr, double delta,
                                    const imlab_codebook* cb, double* out) {
    if (any_null(p, cb, out)) return null_error();
    return guarded([&] { *out = imlab::independence_surrogate_mi(to_params(p), snr, delta, cb->cb); });
}

int imlab_spectral_deviation_experiment(double snr1, double rate_fraction, const int* n_list, int count, int seeds,
                                        uint64_t seed, int* out_m, double* out_mean_dev) {
    if (any_null(n_list, out_m, out_mean_dev)) return null_error();
    return guarded([&] {
        if (count < 1) throw imlab::InvalidArgument("blocklength list is empty");
        const auto rows = imlab::spectral_deviation_experiment(snr1, rate_fraction,
                                                               std::span<const int>(n_list, count), seeds, seed);
        for (size_t i = 0; i < rows.size(); ++i) {
            out_m[i] = rows[i].M;
            out_mean_dev[i] = rows[i].mean_deviation;
        }
    });
}

int imlab_independence_experiment(const imlab_channel_params* p, double snr, double delta, double rate_fraction,
                                  const int* n_list, int count, int seeds, uint64_t seed, int* out_m,
                                  double* out_mean_mi) {
    if (any_null(p, n_list, out_m, out_mean_mi)) return null_error();
    return guarded([&] {
        if (count < 1) throw imlab::InvalidArgument("blocklength list is empty");
        const auto rows = imlab::independence_experiment(to_params(p), snr, delta, rate_fraction,
                                                         std::span<const int>(n_list, count), seeds, seed);
        for (size_t i = 0; i < rows.size(); ++i) {
            out_m[i] = rows[i].M;
            out_mean_mi[i] = rows[i].mean_surrogate_mi;
        }
    });
}

int imlab_constellation_create(int count, const double* values, const double* probs, imlab_constellation** out) {
    if (any_null(values, probs, out)) return null_error();
    return guarded([&] {
        if (count < 1) throw imlab::InvalidArgument("constellation must be non-empty");
        *out = new imlab_constellation{imlab::make_constellation(std::span<const double>(values, count),
                                                                 std::span<const double>(probs, count))};
    });
}

int imlab_constellation_bpsk(imlab_constellation** out) {
    if (any_null(out)) return null_error();
    return guarded([&] { *out = new imlab_constellation{imlab::bpsk()}; });
}

int imlab_constellation_pam4(imlab_constellation** out) {
    if (any_null(out)) return null_error();
    return guarded([&] { *out = new imlab_constellation{imlab::pam4()}; });
}

void imlab_constellation_free(imlab_constellation* c) { delete c; }

int imlab_mmse_quadrature(const imlab_constellation* c, double gamma, int order, double* out) {
    if (any_null(c, out)) return null_error();
    return guarded([&] { *out = imlab::mmse_scalar_quadrature(c->c, gamma, order); });
}

int imlab_mi_quadrature(const imlab_constellation* c, double gamma, int order, double* out) {
    if (any_null(c, out)) return null_error();
    return guarded([&] { *out = imlab::mi_scalar_quadrature(c->c, gamma, order); });
}

int imlab_constellation_verify_immse(const imlab_constellation* c, const double* grid, int grid_len, double h,
                                     double tol, int order, imlab_immse_row* out_rows) {
    if (any_null(c, grid, out_rows)) return null_error();
    return guarded([&] {
        if (grid_len < 1) throw imlab::InvalidArgument("grid must be non-empty");
        const auto rows = imlab::verify_immse(c->c, std::span<const double>(grid, grid_len), h, tol, order);
        copy_rows(rows, out_rows);
    });
}

int imlab_mac_mmse_threshold(const imlab_mac_params* p, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded(
        [&] { *out = imlab::mac_mmse_threshold(imlab::make_mac_params(p->snr1, p->snr2, p->snr_z, p->a)); });
}

int imlab_mac_weak_boundary(const imlab_mac_params* p, double beta, double out_rates[3]) {
    if (any_null(p, out_rates)) return null_error();
    return guarded([&] {
        const auto r = imlab::mac_weak_boundary(imlab::make_mac_params(p->snr1, p->snr2, p->snr_z, p->a), beta);
        out_rates[0] = r.r1;
        out_rates[1] = r.r2;
        out_rates[2] = r.rz;
    });
}

int imlab_intermediate_node_limit(const imlab_cascade_params* p, double a2, double a3, double* out) {
    if (any_null(p, out)) return null_error();
    return guarded([&] {
        *out = imlab::intermediate_node_limit(imlab::make_cascade_params(p->snr1, p->snr2, p->snr3), a2, a3);
    });
}

int imlab_cascade_boundary(const imlab_cascade_params* p, double a, double beta, double out_rates[3]) {
    if (any_null(p, out_rates)) return null_error();
    return guarded([&] {
        const auto r = imlab::cascade_boundary(imlab::make_cascade_params(p->snr1, p->snr2, p->snr3), a, beta);
        out_rates[0] = r.r1;
        out_rates[1] = r.r2;
        out_rates[2] = r.r3;
    });
}

int imlab_cascade_bounds(const imlab_cascade_params* p, double a, double out_bounds[3]) {
    if (any_null(p, out_bounds)) return null_error();
    return guarded([&] {
        const auto b = imlab::cascade_sum_and_individual_bounds(imlab::make_cascade_params(p->snr1, p->snr2, p->snr3), a);
        out_bounds[0] = b.sum;
        out_bounds[1] = b.r2_bound;
        out_bounds[2] = b.r3_bound;
    });
}

}  // extern "C"
