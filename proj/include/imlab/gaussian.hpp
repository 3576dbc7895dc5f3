#pragma once

#include <functional>
#include <span>

#include "imlab/channel.hpp"

namespace imlab {

// Closed-form per-dimension mutual information between a Gaussian i.i.d. z and
// y(gamma) when x rides a capacity-achieving unit-power code. Three regimes:
//   R1: gamma in [0,1)                      x acts as Gaussian noise
//   R2: gamma in [1, 1/(1-a*snr2))          x decodable jointly
//   R3: gamma >= 1/(1-a*snr2)               x removed, plain AWGN in z
// When a*snr2 >= 1 the R3 threshold never triggers and R2 extends to infinity.
// Boundary points belong to the right-closed branch.
enum class Regime { r1 = 1, r2 = 2, r3 = 3 };

Regime mi_regime(const ChannelParams& p, double gamma);
bool at_regime_boundary(const ChannelParams& p, double gamma);

double mi_gaussian_interference(const ChannelParams& p, double gamma);
// Branch formula evaluated regardless of which regime gamma falls in;
// used for one-sided boundary values and continuity checks.
double mi_regime_branch(const ChannelParams& p, Regime r, double gamma);

double d_mi_gaussian_interference(const ChannelParams& p, double gamma);
double d_mi_regime_branch(const ChannelParams& p, Regime r, double gamma);

// Both one-sided derivative values; they differ only on a regime boundary,
// where the flag is set and `right` is the value of the right-closed branch.
struct OneSidedDerivative {
    double right = 0.0;
    double left = 0.0;
    bool at_boundary = false;
};

OneSidedDerivative d_mi_one_sided(const ChannelParams& p, double gamma);

// MMSE of a Gaussian input of the given power over AWGN at snr gamma.
double mmse_gaussian(double power, double gamma);

// Predicted dI/dgamma on gamma in [0,1) from the z-input MMSE profile:
// (1/2) * mmse_z(gamma') * a*snr2 / (1+gamma*snr1)^2.
double d_mi_from_mmse_weak(const ChannelParams& p, double gamma,
                           const std::function<double(double)>& mmse_z);

// I(z; y(gamma) | x) for Gaussian i.i.d. unit-power z: (1/2) ln(1 + gamma*a*snr2).
double conditional_mi_given_x(const ChannelParams& p, double gamma);

// Idealized capacity-achieving codeword profile: mutual information follows
// the Gaussian maximum up to the design SNR and saturates there; the MMSE
// profile is Gaussian-like below the design SNR and exactly zero above it.
struct GoodCodeProfile {
    double snr_design = 1.0;
    double power = 1.0;
};

GoodCodeProfile make_good_code_profile(double snr_design, double power = 1.0);
double mi_good_code(const GoodCodeProfile& c, double gamma);
double mmse_good_code(const GoodCodeProfile& c, double gamma);

// Fisher information of sqrt(delta*alpha) x + n_hat with Var(n_hat) = 1 - delta*alpha,
// through the self-consistent identity J = (1 - g*mmse(x; g)) / (1 - delta*alpha)
// with g = delta*alpha / (1 - delta*alpha). Requires delta*alpha < 1.
double fisher_composite_noise(double delta, double alpha, const std::function<double(double)>& mmse_x);
double fisher_composite_noise_gaussian(double power, double delta, double alpha);

struct WeakSnrParams {
    double delta = 0.0;
    double alpha = 0.0;
    double delta_prime = 0.0;  // delta*alpha / (1 + delta*alpha)
    double delta_hat = 0.0;    // delta / (1 + alpha*delta)
};

WeakSnrParams make_weak_snr_params(double delta, double alpha);

// Weak-SNR lower bound on the normalized mutual information:
// (delta'/(2 alpha)) tr_cov - (delta'^2/2) lambda_max tr_cov.
double weak_snr_lower_bound(double tr_cov, double lambda_max, const WeakSnrParams& w);

// MMSE profile of the sqrt(c)-scaled signal: gamma -> c * mmse_fn(c*gamma).
// Zero-sets shift as gamma* -> gamma*/c.
std::function<double(double)> mmse_scaled_signal(double c, std::function<double(double)> mmse_fn);

// Per-dimension Gaussian MI across one weak increment: z with the given
// covariance spectrum observed through sqrt(delta) z + sqrt(delta*alpha) x + n_hat,
// with Gaussian i.i.d. x of power power_x and Var(n_hat) = 1 - delta*alpha.
double mi_gaussian_composite_weak(std::span<const double> cov_z_eigenvalues, double delta, double alpha,
                                  double power_x = 1.0);

}  // namespace imlab
