// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Tolerances are fixed here, not tunable from outside.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "imlab/channel.hpp"
#include "imlab/estimator.hpp"
#include "imlab/gaussian.hpp"
#include "imlab/kl.hpp"
#include "imlab/linalg.hpp"
#include "imlab/rate_regions.hpp"
#include "imlab/rng.hpp"

using namespace imlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

ChannelParams random_params(Rng& rng, bool weak_interference) {
    const double snr1 = 0.1 + 2.9 * rng.uniform01();
    const double as2 = weak_interference ? 0.05 + 0.9 * rng.uniform01() : 1.0 + 2.0 * rng.uniform01();
    const double snr2 = 0.5 + 3.0 * rng.uniform01();
    return make_channel_params(snr1, snr2, as2 / snr2);
}

Matrix random_spd(int n, Rng& rng, double ridge) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    Matrix s = g * g.transposed();
    s *= 1.0 / n;
    for (int i = 0; i < n; ++i) s(i, i) += ridge;
    return s;
}

// 1. closed-form derivative equals the weak-regime MMSE prediction
Outcome check_weak_derivative() {
    Rng rng(1001);
    auto gaussian_z = [](double g) { return mmse_gaussian(1.0, g); };
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_params(rng, trial % 2 == 0);
        for (int k = 0; k < 200; ++k) {
            const double g = k / 200.0;
            worst = std::max(worst,
                             std::abs(d_mi_from_mmse_weak(p, g, gaussian_z) - d_mi_gaussian_interference(p, g)));
        }
    }
    return {worst <= 1e-12, "max|diff| = " + sci(worst) + " (tol 1e-12)"};
}

// 2. piecewise MI is continuous at both regime boundaries
Outcome check_continuity() {
    Rng rng(1002);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_params(rng, trial % 2 == 0);
        worst = std::max(worst,
                         std::abs(mi_regime_branch(p, Regime::r1, 1.0) - mi_regime_branch(p, Regime::r2, 1.0)));
        if (p.a * p.snr2 < 1.0) {
            const double g3 = 1.0 / (1.0 - p.a * p.snr2);
            worst = std::max(
                worst, std::abs(mi_regime_branch(p, Regime::r2, g3) - mi_regime_branch(p, Regime::r3, g3)));
        }
    }
    return {worst <= 1e-12, "max boundary gap = " + sci(worst) + " (tol 1e-12)"};
}

// 3. recombined increment-noise variance identity
Outcome check_variance_identity() {
    Rng rng(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double snr1 = 3.0 * rng.uniform01();
        const double snr2 = 0.5 + 3.5 * rng.uniform01();
        const auto p = make_channel_params(snr1, snr2, 1.0);
        const double limit = admissible_snr_limit(p);
        const double snr = limit * (0.01 + 0.7 * rng.uniform01());
        const double delta = (limit - snr) * (0.02 + 0.96 * rng.uniform01());
        const auto d = incremental_decomposition(p, snr, delta);
        worst = std::max(worst, std::abs(d.var_nhat - (1.0 - delta * d.alpha)));
    }
    return {worst <= 1e-12, "max|var - (1-delta*alpha)| = " + sci(worst) + " (tol 1e-12)"};
}

// 4. finite-difference derivative vs half MMSE, quadrature and Monte Carlo
Outcome check_derivative_vs_mmse() {
    std::vector<double> grid(200);
    for (int i = 0; i < 200; ++i) grid[i] = 10.0 * i / 199.0;

    int failures = 0;
    double worst_quad = 0.0;
    for (const auto& c : {bpsk(), pam4()}) {
        const auto rows = verify_immse(c, grid, 1e-3, 1e-3, 61);
        for (const auto& r : rows) {
            worst_quad = std::max(worst_quad, r.abs_diff);
            if (!r.pass) ++failures;
        }
    }

    const auto cb = generate_codebook(4, std::log(8.0) / 4.0, 424242);
    const std::vector<double> mc_grid{0.25, 0.5, 1.0, 2.0};
    const auto mc_rows = verify_immse(cb, mc_grid, 1e-3, 1e-3, 200000, 777);
    double worst_mc = 0.0;
    for (const auto& r : mc_rows) {
        worst_mc = std::max(worst_mc, r.abs_diff);
        if (!r.pass) ++failures;
    }
    return {failures == 0, "quadrature max|diff| = " + sci(worst_quad) + " (tol 1e-3), MC max|diff| = " +
                               sci(worst_mc) + " (tol 1e-3 + 3 sigma), M = " + std::to_string(cb.M)};
}

// 5. incremental MI identity, Gaussian instantiation
Outcome check_incremental_identity() {
    Rng rng(1005);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_params(rng, trial % 2 == 0);
        const double limit = admissible_snr_limit(p);
        const double snr = limit * (0.02 + 0.6 * rng.uniform01());
        const double delta = (limit - snr) * (0.05 + 0.9 * rng.uniform01());
        const auto chk = incremental_gaussian_check(p, snr, delta);
        worst = std::max(worst, std::abs(chk.mi_difference - chk.conditional_mi));
    }
    return {worst <= 1e-10, "max|diff| = " + sci(worst) + " (tol 1e-10)"};
}

// 6. blockwise KL equals the direct KL
Outcome check_block_kl() {
    Rng rng(1006);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(48.999 * rng.uniform01());
        const Matrix full = random_spd(2 * n, rng, 0.1);
        Matrix a(n, n), b(n, n), c(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = full(i, j);
                c(i, j) = full(n + i, n + j);
                b(i, j) = full(n + i, j);
            }
        const auto pair = make_block_gaussian_pair(std::move(a), std::move(b), std::move(c));
        const double blockwise = kl_block_independent(pair);
        Matrix block_diag = assemble_block_covariance(pair);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                block_diag(i, n + j) = 0.0;
                block_diag(n + i, j) = 0.0;
            }
        const double direct = kl_gaussian_direct(assemble_block_covariance(pair), block_diag);
        worst = std::max(worst, std::abs(blockwise - direct) / std::max(std::abs(direct), 1e-12));
    }
    return {worst <= 1e-8, "max rel err = " + sci(worst) + " (tol 1e-8)"};
}

// 7. eigenvalue product sandwich
Outcome check_eigen_sandwich() {
    Rng rng(1007);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix m1 = random_spd(4, rng, 0.01);
        const Matrix m2 = random_spd(4, rng, 0.01);
        const auto prod = psd_product_eigenvalues(m1, m2);
        for (int t = 1; t <= 4; ++t) {
            const auto b = eigenvalue_product_bounds(m1, m2, t);
            worst = std::max(worst, b.lower - prod[t - 1]);
            worst = std::max(worst, prod[t - 1] - b.upper);
        }
    }
    return {worst <= 1e-10, "max violation = " + sci(worst) + " (tol 1e-10)"};
}

// 8. codebook spectral deviation strictly decreases in blocklength
Outcome check_spectral_trend() {
    const std::vector<int> ns{8, 16, 24};
    const auto rows = spectral_deviation_experiment(1.0, 0.95, ns, 20, 20250809);
    const bool ok = rows[0].mean_deviation > rows[1].mean_deviation &&
                    rows[1].mean_deviation > rows[2].mean_deviation;
    std::string detail = "mean deviation";
    for (const auto& r : rows)
        detail += " n=" + std::to_string(r.n) + " (M=" + std::to_string(r.M) + "): " + sci(r.mean_deviation) + ";";
    return {ok, detail};
}

// 9. surrogate MI decreases in blocklength, exactly zero at identity covariance
Outcome check_surrogate_trend() {
    const auto p = make_channel_params(1.0, 1.0, 0.5);
    const std::vector<int> ns{8, 16, 24};
    const auto rows = independence_experiment(p, 0.1, 0.05, 0.95, ns, 20, 20250809);
    const bool decreasing = rows[0].mean_surrogate_mi > rows[1].mean_surrogate_mi &&
                            rows[1].mean_surrogate_mi > rows[2].mean_surrogate_mi;
    const double exact_zero = independence_surrogate_mi(p, 0.1, 0.05, hadamard_pair_codebook(8));
    std::string detail = "surrogate";
    for (const auto& r : rows) detail += " n=" + std::to_string(r.n) + ": " + sci(r.mean_surrogate_mi) + ";";
    detail += " identity covariance: " + sci(exact_zero);
    return {decreasing && exact_zero == 0.0, detail};
}

// 10. weak-SNR MI slope approaches tr(Cov)/2n
Outcome check_weak_slope() {
    const std::vector<double> eigs{0.5, 0.8, 1.0, 1.2, 1.5, 2.0};
    const double target = 7.0 / 12.0;
    double prev = 1e300;
    bool ok = true;
    std::string detail = "errors:";
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        const double err = std::abs(mi_gaussian_composite_weak(eigs, delta, 0.5, 1.0) / delta - target);
        detail += " " + sci(err);
        ok = ok && err < prev;
        prev = err;
    }
    return {ok, detail + " (decreasing toward tr/2n)"};
}

// 11. Monte Carlo MMSE matrix max eigenvalue bounded by the input covariance
Outcome check_mmse_matrix_bound() {
    Rng seeder(1011);
    double worst_excess = -1e300;
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const auto cb = generate_codebook(4, std::log(8.0) / 4.0, substream_seed(4242, trial));
        const Matrix cov = codebook_covariance(cb);
        const double max_cov = sym_eigenvalues(cov).front();
        for (double gamma : {0.5, 1.0, 2.0}) {
            const auto est = mmse_matrix_mc(cb, gamma, 20000, substream_seed(999, 100 * trial + 7), 0);
            const double max_e = sym_eigenvalues(est.value.symmetrized()).front();
            const double allowance = 3.0 * est.std_error.frobenius_norm();
            worst_excess = std::max(worst_excess, max_e - max_cov - allowance);
            ok = ok && (max_e <= max_cov + allowance);
        }
    }
    return {ok, "max (lambda_E - lambda_cov - 3 sigma) = " + sci(worst_excess) + " (must be <= 0)"};
}

// 12. rate-region invariants over beta, pinned values reproduced
Outcome check_rate_regions() {
    Rng rng(1012);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto mp = make_mac_params(0.1 + 4.0 * rng.uniform01(), 0.1 + 4.0 * rng.uniform01(),
                                        0.1 + 4.0 * rng.uniform01(), 0.95 * rng.uniform01());
        const double mac_sum = 0.5 * std::log1p(mp.snr1 + mp.snr2);
        const auto cp = make_cascade_params(0.1 + 4.0 * rng.uniform01(), 0.1 + 4.0 * rng.uniform01(),
                                            0.1 + 4.0 * rng.uniform01());
        const double a = 0.9 * rng.uniform01();
        const double cascade_sum =
            0.5 * std::log((1.0 + cp.snr1 + a * cp.snr2 + a * a * cp.snr3) / (1.0 + cp.snr1));
        for (int k = 0; k <= 100; ++k) {
            const double beta = k / 100.0;
            const auto mr = mac_weak_boundary(mp, beta);
            worst = std::max(worst, std::abs(mr.r1 + mr.r2 - mac_sum));
            const auto cr = cascade_boundary(cp, a, beta);
            worst = std::max(worst, std::abs(cr.r2 + cr.r3 - cascade_sum));
        }
    }

    double worst_pin = 0.0;
    const auto mac = make_mac_params(1.0, 1.0, 2.0, 0.5);
    worst_pin = std::max(worst_pin, std::abs(mac_mmse_threshold(mac) - 1.0 / 3.0));
    const auto triple = mac_weak_boundary(mac, 1.0);
    worst_pin = std::max(worst_pin, std::abs(triple.r1 - 0.5 * std::log(2.0)));
    worst_pin = std::max(worst_pin, std::abs(triple.r2 - 0.5 * std::log(1.5)));
    worst_pin = std::max(worst_pin, std::abs(triple.rz - 0.5 * std::log(4.0 / 3.0)));
    worst_pin = std::max(worst_pin,
                         std::abs(intermediate_node_limit(make_cascade_params(1.0, 2.0, 1.0), 0.5, 0.5) -
                                  0.5 * std::log(1.5)));
    const auto cas = cascade_boundary(make_cascade_params(1.0, 2.0, 4.0), 0.5, 1.0);
    worst_pin = std::max(worst_pin, std::abs(cas.r2 - 0.5 * std::log(1.5)));
    worst_pin = std::max(worst_pin, std::abs(cas.r3 - 0.5 * std::log(4.0 / 3.0)));
    const auto bounds = cascade_sum_and_individual_bounds(make_cascade_params(1.0, 2.0, 4.0), 0.5);
    worst_pin = std::max(worst_pin, std::abs(bounds.sum - 0.5 * std::log(2.0)));

    const bool ok = worst <= 1e-12 && worst_pin <= 1e-15;
    return {ok, "max beta-sum drift = " + sci(worst) + " (tol 1e-12), max pinned-value error = " + sci(worst_pin) +
                    " (tol 1e-15)"};
}

// 13. CLI byte determinism across repeated runs and thread counts
Outcome check_cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("imlab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(IMLAB_CLI_PATH) + " " + args + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };

    bool ok = true;
    std::string detail;

    const std::string sweep = "sweep-mi --snr1 1.3 --snr2 0.9 --a 0.6 --gamma-min 0 --gamma-max 5 --steps 101 --out ";
    ok = ok && run(sweep + (dir / "s1.csv").string());
    ok = ok && run(sweep + (dir / "s2.csv").string());
    const bool sweep_same = slurp(dir / "s1.csv") == slurp(dir / "s2.csv");
    detail += std::string("repeat run: ") + (sweep_same ? "identical" : "DIFFERENT");

    const std::string mc = "verify-immse --source codebook --n 4 --rate 0.51986 --gamma-min 0.5 --gamma-max 1.5 "
                           "--steps 3 --samples 40000 --seed 5 ";
    ok = ok && run(mc + "--threads 1 --out " + (dir / "t1.csv").string());
    ok = ok && run(mc + "--threads 8 --out " + (dir / "t8.csv").string());
    const bool thread_same = slurp(dir / "t1.csv") == slurp(dir / "t8.csv");
    detail += std::string("; threads 1 vs 8: ") + (thread_same ? "identical" : "DIFFERENT");

    const std::string indep = "independence-bound --snr1 1 --snr2 1 --a 0.5 --snr 0.1 --delta 0.05 "
                              "--n-list 8,16 --seeds 5 --seed 3 --format json --out ";
    ok = ok && run(indep + (dir / "i1.json").string());
    ok = ok && run(indep + (dir / "i2.json").string());
    const bool indep_same = slurp(dir / "i1.json") == slurp(dir / "i2.json");
    detail += std::string("; json repeat: ") + (indep_same ? "identical" : "DIFFERENT");

    return {ok && sweep_same && thread_same && indep_same, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"weak-regime derivative matches the MMSE prediction", check_weak_derivative},
        {"piecewise MI continuity at regime boundaries", check_continuity},
        {"increment noise variance identity", check_variance_identity},
        {"finite-difference derivative vs half MMSE (quadrature + MC)", check_derivative_vs_mmse},
        {"incremental MI identity, Gaussian instantiation", check_incremental_identity},
        {"blockwise KL equals direct KL", check_block_kl},
        {"eigenvalue product sandwich", check_eigen_sandwich},
        {"codebook spectral deviation decreases with blocklength", check_spectral_trend},
        {"surrogate MI decreases with blocklength, zero at identity", check_surrogate_trend},
        {"weak-SNR MI slope approaches tr(Cov)/2n", check_weak_slope},
        {"MMSE-matrix eigenvalues bounded by input covariance", check_mmse_matrix_bound},
        {"rate-region beta invariance and pinned values", check_rate_regions},
        {"CLI byte determinism across runs and thread counts", check_cli_determinism},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  [%2zu/13] %s  --  %s  [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures == 0) {
        std::printf("all 13 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", failures);
    }
    return failures;
}
