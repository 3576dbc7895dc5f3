#pragma once

#include "imlab/linalg.hpp"

namespace imlab {

// SNR/gain triple of the two-input additive Gaussian channel
//   y(gamma) = sqrt(gamma*a*snr2) z + sqrt(gamma*snr1) x + n.
// All quantities are dimensionless power ratios; information is in nats.
struct ChannelParams {
    double snr1 = 0.0;
    double snr2 = 0.0;
    double a = 0.0;

    // snr1 / (a*snr2); only defined when the interference path exists.
    double alpha() const;
    bool has_interference_path() const noexcept { return a * snr2 > 0.0; }
};

ChannelParams make_channel_params(double snr1, double snr2, double a);

struct GammaPoint {
    double gamma = 0.0;
    double gamma_prime = 0.0;
};

// Effective SNR of the z-to-output channel after normalizing out the x path:
// gamma' = gamma*a*snr2 / (1 + gamma*snr1). Strictly increasing, with
// supremum a*snr2/snr1 for snr1 > 0.
double gamma_prime(const ChannelParams& p, double gamma);
double d_gamma_prime(const ChannelParams& p, double gamma);
GammaPoint gamma_point(const ChannelParams& p, double gamma);

// Largest admissible effective SNR for the incremental split: a*snr2/(1+snr1).
double admissible_snr_limit(const ChannelParams& p);

// One SNR increment snr -> snr+delta of the normalized channel
//   y = z + sqrt(alpha) x + noise, split into two cascaded observations with
// noise variances sigma1_sq and sigma2_sq. var_nhat is the variance of the
// recombined increment noise, computed from the defining sum
// delta*sigma1_sq + (snr^2/delta)*sigma2_sq; it equals 1 - delta*alpha.
struct IncrementalDecomposition {
    double snr = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
    double var_nhat = 0.0;
};

IncrementalDecomposition incremental_decomposition(const ChannelParams& p, double snr, double delta);

// Cross-covariance of the two cascade outputs: alpha * (cov_x - I).
// Zero exactly when cov_x is the identity.
Matrix cross_correlation_matrix(const Matrix& cov_x, double alpha);

}  // namespace imlab
