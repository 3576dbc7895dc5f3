#include "imlab/channel.hpp"

#include <cmath>
#include <string>

#include "imlab/errors.hpp"

namespace imlab {

double ChannelParams::alpha() const {
    if (!has_interference_path()) throw DomainError("alpha undefined: a*snr2 = 0 (no interference path)");
    return snr1 / (a * snr2);
}

ChannelParams make_channel_params(double snr1, double snr2, double a) {
    if (!(snr1 >= 0.0) || !(snr2 >= 0.0) || !(a >= 0.0))
        throw DomainError("channel parameters must be non-negative finite values");
    if (!std::isfinite(snr1) || !std::isfinite(snr2) || !std::isfinite(a))
        throw DomainError("channel parameters must be non-negative finite values");
    return ChannelParams{snr1, snr2, a};
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
}

}  // namespace

double gamma_prime(const ChannelParams& p, double gamma) {
    check_gamma(gamma);
    return gamma * p.a * p.snr2 / (1.0 + gamma * p.snr1);
}

double d_gamma_prime(const ChannelParams& p, double gamma) {
    check_gamma(gamma);
    const double den = 1.0 + gamma * p.snr1;
    return p.a * p.snr2 / (den * den);
}

GammaPoint gamma_point(const ChannelParams& p, double gamma) {
    return GammaPoint{gamma, gamma_prime(p, gamma)};
}

double admissible_snr_limit(const ChannelParams& p) { return p.a * p.snr2 / (1.0 + p.snr1); }

IncrementalDecomposition incremental_decomposition(const ChannelParams& p, double snr, double delta) {
    if (!(snr > 0.0) || !(delta > 0.0)) throw DomainError("incremental decomposition requires snr > 0 and delta > 0");
    const double alpha = p.alpha();
    const double limit = admissible_snr_limit(p);
    if (snr + delta > limit)
        throw RangeError("snr + delta = " + std::to_string(snr + delta) +
                         " outside the admissible interval [0, " + std::to_string(limit) + "]");

    IncrementalDecomposition d;
    d.snr = snr;
    d.delta = delta;
    d.alpha = alpha;
    d.sigma1_sq = 1.0 / (snr + delta) - alpha;
    d.sigma2_sq = (1.0 / snr - alpha) - d.sigma1_sq;
    d.var_nhat = delta * d.sigma1_sq + (snr * snr / delta) * d.sigma2_sq;
    return d;
}

Matrix cross_correlation_matrix(const Matrix& cov_x, double alpha) {
    if (!cov_x.is_square()) throw InvalidArgument("covariance must be square");
    const double scale = std::max(cov_x.max_abs(), 1.0);
    if (cov_x.asymmetry() > 1e-10 * scale) throw InvalidArgument("covariance must be symmetric");
    Matrix b = cov_x;
    for (int i = 0; i < b.rows(); ++i) b(i, i) -= 1.0;
    b *= alpha;
    return b;
}

}  // namespace imlab
