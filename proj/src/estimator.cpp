#include "imlab/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "imlab/errors.hpp"
#include "imlab/kl.hpp"
#include "imlab/quadrature.hpp"
#include "imlab/rng.hpp"

namespace imlab {

namespace {

constexpr long long kChunkSamples = 4096;
constexpr long long kCodebookCap = 1LL << 20;

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, samples_in_chunk) over all chunks, possibly in
// parallel. Partials are stored per chunk and later reduced in chunk order.
template <typename Partial, typename ChunkFn>
std::vector<Partial> run_chunked(long long samples, int threads, const ChunkFn& fn) {
    const long long n_chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<Partial> partials(static_cast<size_t>(n_chunks));
    const int workers = static_cast<int>(std::min<long long>(resolve_threads(threads), n_chunks));

    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (;;) {
            const long long c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                const long long count = std::min(kChunkSamples, samples - c * kChunkSamples);
                partials[static_cast<size_t>(c)] = fn(c, count);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return partials;
}

struct ScalarPartial {
    double sum = 0.0;
    double sumsq = 0.0;
};

McEstimate reduce_scalar(const std::vector<ScalarPartial>& partials, long long samples, std::uint64_t seed) {
    double sum = 0.0;
    double sumsq = 0.0;
    for (const auto& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
    }
    McEstimate e;
    e.samples = samples;
    e.seed = seed;
    e.value = sum / static_cast<double>(samples);
    if (samples > 1) {
        const double var = std::max(0.0, (sumsq - samples * e.value * e.value) / static_cast<double>(samples - 1));
        e.std_error = std::sqrt(var / static_cast<double>(samples));
    }
    return e;
}

void check_mc_args(const Codebook& cb, double gamma, long long samples) {
    if (cb.M < 1 || cb.n < 1) throw InvalidArgument("codebook is empty");
    if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
    if (samples < 100) throw DomainError("at least 100 Monte Carlo samples required");
}

// log-weights of the posterior over codewords for output y at sqrt-SNR sg
void posterior_log_weights(const Codebook& cb, std::span<const double> y, double sg, std::span<double> logw) {
    for (int i = 0; i < cb.M; ++i) {
        const auto xi = cb.word(i);
        double d2 = 0.0;
        for (int d = 0; d < cb.n; ++d) {
            const double r = y[d] - sg * xi[d];
            d2 += r * r;
        }
        logw[i] = -0.5 * d2;
    }
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// posterior mean into xhat; logw is scratch
void posterior_mean(const Codebook& cb, std::span<const double> y, double sg, std::span<double> logw,
                    std::span<double> xhat) {
    posterior_log_weights(cb, y, sg, logw);
    const double m = *std::max_element(logw.begin(), logw.end());
    double wsum = 0.0;
    std::fill(xhat.begin(), xhat.end(), 0.0);
    for (int i = 0; i < cb.M; ++i) {
        const double w = std::exp(logw[i] - m);
        wsum += w;
        const auto xi = cb.word(i);
        for (int d = 0; d < cb.n; ++d) xhat[d] += w * xi[d];
    }
    for (int d = 0; d < cb.n; ++d) xhat[d] /= wsum;
}

}  // namespace

double Constellation::mean() const {
    double m = 0.0;
    for (const auto& pt : points) m += pt.prob * pt.value;
    return m;
}

double Constellation::second_moment() const {
    double m = 0.0;
    for (const auto& pt : points) m += pt.prob * pt.value * pt.value;
    return m;
}

double Constellation::variance() const {
    const double m = mean();
    return second_moment() - m * m;
}

Constellation make_constellation(std::span<const double> values, std::span<const double> probs) {
    if (values.empty() || values.size() != probs.size())
        throw InvalidArgument("constellation needs matching non-empty values and probabilities");
    Constellation c;
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || !(probs[i] >= 0.0))
            throw DomainError("constellation points must be finite with non-negative probabilities");
        total += probs[i];
        c.points.push_back({values[i], probs[i]});
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("constellation probabilities must sum to 1");
    return c;
}

Constellation bpsk() {
    const double v[] = {-1.0, 1.0};
    const double p[] = {0.5, 0.5};
    return make_constellation(v, p);
}

Constellation pam4() {
    const double s = 1.0 / std::sqrt(5.0);
    const double v[] = {-3.0 * s, -1.0 * s, 1.0 * s, 3.0 * s};
    const double p[] = {0.25, 0.25, 0.25, 0.25};
    return make_constellation(v, p);
}

Codebook make_codebook(int n, std::vector<double> words) {
    if (n < 1) throw InvalidArgument("blocklength must be at least 1");
    if (words.empty() || words.size() % static_cast<size_t>(n) != 0)
        throw InvalidArgument("codeword data must be a non-empty multiple of n");
    Codebook cb;
    cb.n = n;
    cb.M = static_cast<int>(words.size() / static_cast<size_t>(n));
    cb.words = std::move(words);
    for (int i = 0; i < cb.M; ++i) {
        double e = 0.0;
        for (double v : cb.word(i)) {
            if (!std::isfinite(v)) throw DomainError("codeword has non-finite entries");
            e += v * v;
        }
        if (e / n > 1.0 + 1e-12)
            throw DomainError("codeword " + std::to_string(i) + " violates the unit power constraint");
    }
    return cb;
}

Codebook generate_codebook(int n, double rate_nats, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("blocklength must be at least 1");
    if (!(rate_nats >= 0.0)) throw DomainError("rate must be non-negative");
    const double m_real = std::exp(n * rate_nats);
    if (m_real > static_cast<double>(kCodebookCap) + 0.5)
        throw ResourceError("codebook size M = " + std::to_string(m_real) + " exceeds the cap " +
                            std::to_string(kCodebookCap));
    const long long m = std::llround(m_real);

    Rng rng(seed);
    std::vector<double> words(static_cast<size_t>(m) * n);
    const double radius = std::sqrt(static_cast<double>(n));
    for (long long i = 0; i < m; ++i) {
        double* w = words.data() + i * n;
        double norm2 = 0.0;
        for (int d = 0; d < n; ++d) {
            w[d] = rng.normal();
            norm2 += w[d] * w[d];
        }
        if (norm2 == 0.0) {
            w[0] = radius;
            continue;
        }
        const double scale = radius / std::sqrt(norm2);
        for (int d = 0; d < n; ++d) w[d] *= scale;
    }

    Codebook cb;
    cb.n = n;
    cb.M = static_cast<int>(m);
    cb.words = std::move(words);
    return cb;
}

Codebook hadamard_pair_codebook(int n) {
    if (n < 1 || (n & (n - 1)) != 0) throw InvalidArgument("blocklength must be a power of two");
    // Sylvester recursion, entries +-1
    std::vector<double> h(static_cast<size_t>(n) * n, 1.0);
    for (int block = 1; block < n; block *= 2) {
        for (int r = 0; r < block; ++r)
            for (int c = 0; c < block; ++c) {
                const double v = h[static_cast<size_t>(r) * n + c];
                h[static_cast<size_t>(r) * n + c + block] = v;
                h[static_cast<size_t>(r + block) * n + c] = v;
                h[static_cast<size_t>(r + block) * n + c + block] = -v;
            }
    }
    std::vector<double> words(static_cast<size_t>(2 * n) * n);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < n; ++d) {
            words[static_cast<size_t>(2 * i) * n + d] = h[static_cast<size_t>(i) * n + d];
            words[static_cast<size_t>(2 * i + 1) * n + d] = -h[static_cast<size_t>(i) * n + d];
        }
    Codebook cb;
    cb.n = n;
    cb.M = 2 * n;
    cb.words = std::move(words);
    return cb;
}

std::vector<double> conditional_mean(const Codebook& cb, std::span<const double> y, double gamma) {
    if (cb.M < 1 || cb.n < 1) throw InvalidArgument("codebook is empty");
    if (static_cast<int>(y.size()) != cb.n) throw InvalidArgument("output dimension mismatch");
    if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
    for (double v : y)
        if (!std::isfinite(v)) throw DomainError("output vector has non-finite entries");

    std::vector<double> logw(cb.M);
    std::vector<double> xhat(cb.n);
    posterior_mean(cb, y, std::sqrt(gamma), logw, xhat);
    return xhat;
}

McEstimate mmse_codebook_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed,
                            int threads) {
    check_mc_args(cb, gamma, samples);
    const double sg = std::sqrt(gamma);
    const int n = cb.n;

    auto chunk = [&](long long chunk_idx, long long count) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(chunk_idx)));
        std::vector<double> y(n), logw(cb.M), xhat(n);
        ScalarPartial p;
        for (long long s = 0; s < count; ++s) {
            const int i = rng.uniform_index(cb.M);
            const auto xi = cb.word(i);
            for (int d = 0; d < n; ++d) y[d] = sg * xi[d] + rng.normal();
            posterior_mean(cb, y, sg, logw, xhat);
            double e = 0.0;
            for (int d = 0; d < n; ++d) {
                const double r = xi[d] - xhat[d];
                e += r * r;
            }
            e /= n;
            p.sum += e;
            p.sumsq += e * e;
        }
        return p;
    };
    return reduce_scalar(run_chunked<ScalarPartial>(samples, threads, chunk), samples, seed);
}

McMatrixEstimate mmse_matrix_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed,
                                int threads) {
    check_mc_args(cb, gamma, samples);
    const double sg = std::sqrt(gamma);
    const int n = cb.n;

    struct MatrixPartial {
        std::vector<double> sum, sumsq;
    };
    auto chunk = [&](long long chunk_idx, long long count) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(chunk_idx)));
        std::vector<double> y(n), logw(cb.M), xhat(n), err(n);
        MatrixPartial p;
        p.sum.assign(static_cast<size_t>(n) * n, 0.0);
        p.sumsq.assign(static_cast<size_t>(n) * n, 0.0);
        for (long long s = 0; s < count; ++s) {
            const int i = rng.uniform_index(cb.M);
            const auto xi = cb.word(i);
            for (int d = 0; d < n; ++d) y[d] = sg * xi[d] + rng.normal();
            posterior_mean(cb, y, sg, logw, xhat);
            for (int d = 0; d < n; ++d) err[d] = xi[d] - xhat[d];
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    const double v = err[r] * err[c];
                    p.sum[static_cast<size_t>(r) * n + c] += v;
                    p.sumsq[static_cast<size_t>(r) * n + c] += v * v;
                }
            }
        }
        return p;
    };

    const auto partials = run_chunked<MatrixPartial>(samples, threads, chunk);
    std::vector<double> sum(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> sumsq(static_cast<size_t>(n) * n, 0.0);
    for (const auto& p : partials) {
        for (size_t k = 0; k < sum.size(); ++k) {
            sum[k] += p.sum[k];
            sumsq[k] += p.sumsq[k];
        }
    }

    McMatrixEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = Matrix(n, n);
    out.std_error = Matrix(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const size_t k = static_cast<size_t>(r) * n + c;
            const double mean = sum[k] / static_cast<double>(samples);
            out.value(r, c) = mean;
            if (samples > 1) {
                const double var =
                    std::max(0.0, (sumsq[k] - samples * mean * mean) / static_cast<double>(samples - 1));
                out.std_error(r, c) = std::sqrt(var / static_cast<double>(samples));
            }
        }
    }
    return out;
}

McEstimate mi_codebook_mc(const Codebook& cb, double gamma, long long samples, std::uint64_t seed, int threads) {
    check_mc_args(cb, gamma, samples);
    const double sg = std::sqrt(gamma);
    const int n = cb.n;
    const double log_m = std::log(static_cast<double>(cb.M));

    auto chunk = [&](long long chunk_idx, long long count) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(chunk_idx)));
        std::vector<double> y(n), logw(cb.M);
        ScalarPartial p;
        for (long long s = 0; s < count; ++s) {
            const int i = rng.uniform_index(cb.M);
            const auto xi = cb.word(i);
            for (int d = 0; d < n; ++d) y[d] = sg * xi[d] + rng.normal();
            posterior_log_weights(cb, y, sg, logw);
            const double v = logw[i] + log_m - log_sum_exp(logw);
            p.sum += v;
            p.sumsq += v * v;
        }
        return p;
    };
    return reduce_scalar(run_chunked<ScalarPartial>(samples, threads, chunk), samples, seed);
}

namespace {

void check_quadrature_args(const Constellation& c, double gamma, int order) {
    if (c.points.empty()) throw InvalidArgument("constellation is empty");
    if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
    if (order < 20) throw DomainError("quadrature order too small for the requested tolerance (minimum 20)");
}

}  // namespace

double mmse_scalar_quadrature(const Constellation& c, double gamma, int order) {
    check_quadrature_args(c, gamma, order);
    const auto& rule = gauss_hermite(order);
    const double sg = std::sqrt(gamma);
    const size_t k = c.points.size();

    std::vector<double> logw(k);
    double total = 0.0;
    for (const auto& pj : c.points) {
        double inner = 0.0;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = sg * pj.value + rule.nodes[q];
            double m = -1e300;
            for (size_t i = 0; i < k; ++i) {
                const double r = y - sg * c.points[i].value;
                logw[i] = -0.5 * r * r + std::log(c.points[i].prob == 0.0 ? 5e-324 : c.points[i].prob);
                m = std::max(m, logw[i]);
            }
            double wsum = 0.0;
            double mean = 0.0;
            for (size_t i = 0; i < k; ++i) {
                const double w = std::exp(logw[i] - m);
                wsum += w;
                mean += w * c.points[i].value;
            }
            mean /= wsum;
            double var = 0.0;
            for (size_t i = 0; i < k; ++i) {
                const double w = std::exp(logw[i] - m) / wsum;
                const double d = c.points[i].value - mean;
                var += w * d * d;
            }
            inner += rule.weights[q] * var;
        }
        total += pj.prob * inner;
    }
    return total;
}

double mi_scalar_quadrature(const Constellation& c, double gamma, int order) {
    check_quadrature_args(c, gamma, order);
    if (gamma == 0.0) return 0.0;
    const auto& rule = gauss_hermite(order);
    const double sg = std::sqrt(gamma);
    const size_t k = c.points.size();

    std::vector<double> terms(k);
    double total = 0.0;
    for (const auto& pj : c.points) {
        double inner = 0.0;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            const double u = rule.nodes[q];
            double m = -1e300;
            for (size_t i = 0; i < k; ++i) {
                const double r = sg * (pj.value - c.points[i].value) + u;
                terms[i] = -0.5 * r * r + std::log(c.points[i].prob == 0.0 ? 5e-324 : c.points[i].prob);
                m = std::max(m, terms[i]);
            }
            double s = 0.0;
            for (size_t i = 0; i < k; ++i) s += std::exp(terms[i] - m);
            inner += rule.weights[q] * (-0.5 * u * u - (m + std::log(s)));
        }
        total += pj.prob * inner;
    }
    return std::abs(total) < 1e-12 ? std::max(total, 0.0) : total;
}

namespace {

constexpr int kQuadratureOrderCap = 200;

template <typename Fn>
double gated_quadrature(const Fn& eval, double tol, int start_order) {
    if (!(tol > 0.0)) throw DomainError("gate tolerance must be positive");
    double prev = eval(start_order);
    for (int order = start_order + 20; order <= kQuadratureOrderCap; order += 20) {
        const double cur = eval(order);
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw NumericError("quadrature order too small for the requested tolerance (no convergence below order " +
                       std::to_string(kQuadratureOrderCap) + ")");
}

}  // namespace

double mmse_scalar_quadrature_gated(const Constellation& c, double gamma, double tol, int start_order) {
    return gated_quadrature([&](int order) { return mmse_scalar_quadrature(c, gamma, order); }, tol, start_order);
}

double mi_scalar_quadrature_gated(const Constellation& c, double gamma, double tol, int start_order) {
    return gated_quadrature([&](int order) { return mi_scalar_quadrature(c, gamma, order); }, tol, start_order);
}

namespace {

double check_grid_and_step(std::span<const double> grid, double h) {
    if (grid.empty()) throw InvalidArgument("gamma grid is empty");
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    if (!(grid.front() >= 0.0)) throw DomainError("gamma grid must be non-negative");
    double min_spacing = 0.0;
    for (size_t i = 1; i < grid.size(); ++i) {
        const double d = grid[i] - grid[i - 1];
        if (!(d > 0.0)) throw InvalidArgument("gamma grid must be strictly increasing");
        min_spacing = (i == 1) ? d : std::min(min_spacing, d);
    }
    if (grid.size() > 1) {
        const double h_max = h * std::max(1.0, grid.back());
        if (h_max > min_spacing / 4.0)
            throw RangeError("step h*max(1,gamma) = " + std::to_string(h_max) +
                             " exceeds a quarter of the smallest grid spacing " + std::to_string(min_spacing));
    }
    return min_spacing;
}

}  // namespace

std::vector<ImmseRow> verify_immse(const Constellation& c, std::span<const double> grid, double h, double tol,
                                   int order) {
    check_grid_and_step(grid, h);
    std::vector<ImmseRow> rows;
    rows.reserve(grid.size());
    for (double g : grid) {
        const double he = h * std::max(1.0, g);
        ImmseRow row;
        row.gamma = g;
        if (g >= he) {
            row.lhs = (mi_scalar_quadrature(c, g + he, order) - mi_scalar_quadrature(c, g - he, order)) / (2.0 * he);
        } else {
            row.lhs = (mi_scalar_quadrature(c, g + he, order) - mi_scalar_quadrature(c, g, order)) / he;
        }
        row.rhs = 0.5 * mmse_scalar_quadrature(c, g, order);
        row.abs_diff = std::abs(row.lhs - row.rhs);
        row.std_error = 0.0;
        row.pass = row.abs_diff <= tol;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ImmseRow> verify_immse(const Codebook& cb, std::span<const double> grid, double h, double tol,
                                   long long samples, std::uint64_t seed, int threads) {
    check_grid_and_step(grid, h);
    if (samples < 100) throw DomainError("at least 100 Monte Carlo samples required");
    const int n = cb.n;
    const double log_m = std::log(static_cast<double>(cb.M));

    std::vector<ImmseRow> rows;
    rows.reserve(grid.size());
    for (size_t gi = 0; gi < grid.size(); ++gi) {
        const double g = grid[gi];
        const double he = h * std::max(1.0, g);
        const bool central = g >= he;
        const double g_hi = g + he;
        const double g_lo = central ? g - he : g;
        const double denom = central ? 2.0 * he : he;
        const double sg = std::sqrt(g);
        const double sg_hi = std::sqrt(g_hi);
        const double sg_lo = std::sqrt(g_lo);

        struct Partial {
            double sum_fd = 0.0, sum_e = 0.0, sum_d = 0.0, sumsq_d = 0.0;
        };
        auto chunk = [&](long long chunk_idx, long long count) {
            Rng rng(substream_seed(substream_seed(seed, static_cast<std::uint64_t>(gi)),
                                   static_cast<std::uint64_t>(chunk_idx)));
            std::vector<double> u(n), y(n), logw(cb.M), xhat(n);
            Partial p;
            for (long long s = 0; s < count; ++s) {
                const int i = rng.uniform_index(cb.M);
                const auto xi = cb.word(i);
                for (int d = 0; d < n; ++d) u[d] = rng.normal();

                // mutual-information density at the two displaced SNRs, same draw
                auto mi_sample = [&](double sgamma) {
                    for (int d = 0; d < n; ++d) y[d] = sgamma * xi[d] + u[d];
                    posterior_log_weights(cb, y, sgamma, logw);
                    return logw[i] + log_m - log_sum_exp(logw);
                };
                const double fd = (mi_sample(sg_hi) - mi_sample(sg_lo)) / denom / n;

                for (int d = 0; d < n; ++d) y[d] = sg * xi[d] + u[d];
                posterior_mean(cb, y, sg, logw, xhat);
                double e = 0.0;
                for (int d = 0; d < n; ++d) {
                    const double r = xi[d] - xhat[d];
                    e += r * r;
                }
                const double half_mmse = 0.5 * e / n;
                const double diff = fd - half_mmse;
                p.sum_fd += fd;
                p.sum_e += half_mmse;
                p.sum_d += diff;
                p.sumsq_d += diff * diff;
            }
            return p;
        };

        const auto partials = run_chunked<Partial>(samples, threads, chunk);
        double sum_fd = 0.0, sum_e = 0.0, sum_d = 0.0, sumsq_d = 0.0;
        for (const auto& p : partials) {
            sum_fd += p.sum_fd;
            sum_e += p.sum_e;
            sum_d += p.sum_d;
            sumsq_d += p.sumsq_d;
        }
        ImmseRow row;
        row.gamma = g;
        row.lhs = sum_fd / samples;
        row.rhs = sum_e / samples;
        const double mean_d = sum_d / samples;
        row.abs_diff = std::abs(mean_d);
        if (samples > 1) {
            const double var = std::max(0.0, (sumsq_d - samples * mean_d * mean_d) / (samples - 1.0));
            row.std_error = std::sqrt(var / samples);
        }
        row.pass = row.abs_diff <= tol + 3.0 * row.std_error;
        rows.push_back(row);
    }
    return rows;
}

Matrix codebook_covariance(const Codebook& cb) {
    if (cb.M < 1 || cb.n < 1) throw InvalidArgument("codebook is empty");
    const int n = cb.n;
    std::vector<double> mean(n, 0.0);
    for (int i = 0; i < cb.M; ++i) {
        const auto xi = cb.word(i);
        for (int d = 0; d < n; ++d) mean[d] += xi[d];
    }
    for (double& m : mean) m /= cb.M;

    Matrix cov(n, n);
    for (int i = 0; i < cb.M; ++i) {
        const auto xi = cb.word(i);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) cov(r, c) += (xi[r] - mean[r]) * (xi[c] - mean[c]);
    }
    cov *= 1.0 / cb.M;
    return cov;
}

double spectral_deviation(const Codebook& cb) {
    const auto lambdas = sym_eigenvalues(codebook_covariance(cb));
    double dev = 0.0;
    for (double l : lambdas) dev = std::max(dev, std::abs(l - 1.0));
    return dev;
}

std::vector<SpectralDeviationRow> spectral_deviation_experiment(double snr1, double rate_fraction,
                                                                std::span<const int> n_list, int seeds,
                                                                std::uint64_t seed) {
    if (!(snr1 >= 0.0)) throw DomainError("snr1 must be non-negative");
    if (!(rate_fraction > 0.0) || rate_fraction > 1.0) throw DomainError("rate fraction must lie in (0, 1]");
    if (seeds < 1) throw InvalidArgument("at least one seed required");
    if (n_list.empty()) throw InvalidArgument("blocklength list is empty");

    const double rate = rate_fraction * 0.5 * std::log1p(snr1);
    std::vector<SpectralDeviationRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        double total = 0.0;
        int m = 0;
        for (int s = 0; s < seeds; ++s) {
            const Codebook cb =
                generate_codebook(n, rate, substream_seed(seed, (static_cast<std::uint64_t>(n) << 20) + s));
            total += spectral_deviation(cb);
            m = cb.M;
        }
        rows.push_back({n, m, total / seeds});
    }
    return rows;
}

double independence_surrogate_mi(const ChannelParams& p, double snr, double delta, const Codebook& cb) {
    const IncrementalDecomposition dec = incremental_decomposition(p, snr, delta);
    const Matrix cov = codebook_covariance(cb);
    const int n = cb.n;
    const double k = snr / delta;

    Matrix a = cov;
    a *= dec.alpha;
    Matrix c = a;
    for (int i = 0; i < n; ++i) {
        a(i, i) += dec.sigma1_sq + dec.sigma2_sq;
        c(i, i) += dec.sigma1_sq + k * k * dec.sigma2_sq;
    }
    const Matrix b = cross_correlation_matrix(cov, dec.alpha);
    return kl_block_independent(make_block_gaussian_pair(std::move(a), b, std::move(c))) / n;
}

std::vector<IndependenceExperimentRow> independence_experiment(const ChannelParams& p, double snr, double delta,
                                                               double rate_fraction, std::span<const int> n_list,
                                                               int seeds, std::uint64_t seed) {
    if (!(rate_fraction > 0.0) || rate_fraction > 1.0) throw DomainError("rate fraction must lie in (0, 1]");
    if (seeds < 1) throw InvalidArgument("at least one seed required");
    if (n_list.empty()) throw InvalidArgument("blocklength list is empty");

    const double rate = rate_fraction * 0.5 * std::log1p(p.snr1);
    std::vector<IndependenceExperimentRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        double total = 0.0;
        int m = 0;
        for (int s = 0; s < seeds; ++s) {
            const Codebook cb =
                generate_codebook(n, rate, substream_seed(seed, (static_cast<std::uint64_t>(n) << 20) + s));
            total += independence_surrogate_mi(p, snr, delta, cb);
            m = cb.M;
        }
        rows.push_back({n, m, total / seeds});
    }
    return rows;
}

IncrementalGaussianCheck incremental_gaussian_check(const ChannelParams& p, double snr, double delta) {
    const IncrementalDecomposition dec = incremental_decomposition(p, snr, delta);

    // covariance of (z, y_plus, y_minus) per dimension, unit powers
    const double vy_plus = 1.0 + dec.alpha + dec.sigma1_sq;
    const double vy_minus = vy_plus + dec.sigma2_sq;
    Matrix joint(3, 3);
    joint(0, 0) = 1.0;
    joint(1, 1) = vy_plus;
    joint(2, 2) = vy_minus;
    joint(0, 1) = joint(1, 0) = 1.0;
    joint(0, 2) = joint(2, 0) = 1.0;
    joint(1, 2) = joint(2, 1) = vy_plus;

    auto gaussian_mi = [](const Matrix& cov, int split) {
        // I(U;V) = KL(joint || product of marginals) for the blocks [0,split) and [split,n)
        const int n = cov.rows();
        Matrix block_diag = cov;
        for (int i = 0; i < split; ++i)
            for (int j = split; j < n; ++j) {
                block_diag(i, j) = 0.0;
                block_diag(j, i) = 0.0;
            }
        return kl_gaussian_direct(cov, block_diag);
    };

    IncrementalGaussianCheck out;
    out.var_nhat = dec.var_nhat;
    out.mi_difference = 0.5 * std::log1p(snr + delta) - 0.5 * std::log1p(snr);

    Matrix pair_minus(2, 2);
    pair_minus(0, 0) = 1.0;
    pair_minus(1, 1) = vy_minus;
    pair_minus(0, 1) = pair_minus(1, 0) = 1.0;
    const double mi_z_minus = gaussian_mi(pair_minus, 1);
    out.conditional_mi = gaussian_mi(joint, 1) - mi_z_minus;
    return out;
}

TruncationResult truncate_components(std::span<const double> z, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
    TruncationResult out;
    out.clipped.reserve(z.size());
    out.all_within = true;
    for (double v : z) {
        if (std::abs(v) < kappa) {
            out.clipped.push_back(v);
        } else {
            out.clipped.push_back(kappa);
            out.all_within = false;
        }
    }
    return out;
}

}  // namespace imlab
