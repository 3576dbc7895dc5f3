#include "imlab/gaussian.hpp"

#include <cmath>
#include <string>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
}

bool has_third_regime(const ChannelParams& p) { return p.a * p.snr2 < 1.0; }

double third_regime_threshold(const ChannelParams& p) { return 1.0 / (1.0 - p.a * p.snr2); }

}  // namespace

Regime mi_regime(const ChannelParams& p, double gamma) {
    check_gamma(gamma);
    if (gamma < 1.0) return Regime::r1;
    if (!has_third_regime(p)) return Regime::r2;
    return gamma < third_regime_threshold(p) ? Regime::r2 : Regime::r3;
}

bool at_regime_boundary(const ChannelParams& p, double gamma) {
    check_gamma(gamma);
    if (gamma == 1.0) return true;
    return has_third_regime(p) && gamma == third_regime_threshold(p);
}

double mi_regime_branch(const ChannelParams& p, Regime r, double gamma) {
    check_gamma(gamma);
    const double as2 = p.a * p.snr2;
    switch (r) {
        case Regime::r1:
            return 0.5 * std::log1p(gamma * as2 / (1.0 + gamma * p.snr1));
        case Regime::r2:
            return 0.5 * std::log((1.0 + gamma * (as2 + p.snr1)) / (1.0 + p.snr1));
        case Regime::r3:
            return 0.5 * std::log1p(gamma * as2);
    }
    throw InvalidArgument("unknown regime");
}

double mi_gaussian_interference(const ChannelParams& p, double gamma) {
    return mi_regime_branch(p, mi_regime(p, gamma), gamma);
}

double d_mi_regime_branch(const ChannelParams& p, Regime r, double gamma) {
    check_gamma(gamma);
    const double as2 = p.a * p.snr2;
    switch (r) {
        case Regime::r1: {
            const double den = 1.0 + gamma * p.snr1;
            return 0.5 * as2 / (den * (den + gamma * as2));
        }
        case Regime::r2:
            return 0.5 * (as2 + p.snr1) / (1.0 + gamma * (as2 + p.snr1));
        case Regime::r3:
            return 0.5 * as2 / (1.0 + gamma * as2);
    }
    throw InvalidArgument("unknown regime");
}

double d_mi_gaussian_interference(const ChannelParams& p, double gamma) {
    return d_mi_regime_branch(p, mi_regime(p, gamma), gamma);
}

OneSidedDerivative d_mi_one_sided(const ChannelParams& p, double gamma) {
    OneSidedDerivative out;
    const Regime r = mi_regime(p, gamma);
    out.right = d_mi_regime_branch(p, r, gamma);
    out.at_boundary = at_regime_boundary(p, gamma);
    if (out.at_boundary) {
        const Regime left = (r == Regime::r2) ? Regime::r1 : Regime::r2;
        out.left = d_mi_regime_branch(p, left, gamma);
    } else {
        out.left = out.right;
    }
    return out;
}

double mmse_gaussian(double power, double gamma) {
    if (!(power > 0.0)) throw DomainError("power must be positive");
    check_gamma(gamma);
    return power / (1.0 + gamma * power);
}

double d_mi_from_mmse_weak(const ChannelParams& p, double gamma, const std::function<double(double)>& mmse_z) {
    check_gamma(gamma);
    if (gamma >= 1.0) throw DomainError("weak-regime prediction is defined for gamma in [0,1)");
    return 0.5 * mmse_z(gamma_prime(p, gamma)) * d_gamma_prime(p, gamma);
}

double conditional_mi_given_x(const ChannelParams& p, double gamma) {
    check_gamma(gamma);
    return 0.5 * std::log1p(gamma * p.a * p.snr2);
}

GoodCodeProfile make_good_code_profile(double snr_design, double power) {
    if (!(snr_design > 0.0)) throw DomainError("design SNR must be positive");
    if (!(power > 0.0)) throw DomainError("power must be positive");
    return GoodCodeProfile{snr_design, power};
}

double mi_good_code(const GoodCodeProfile& c, double gamma) {
    check_gamma(gamma);
    return 0.5 * std::log1p(std::min(gamma, c.snr_design) * c.power);
}

double mmse_good_code(const GoodCodeProfile& c, double gamma) {
    check_gamma(gamma);
    if (gamma >= c.snr_design) return 0.0;
    return c.power / (1.0 + gamma * c.power);
}

double fisher_composite_noise(double delta, double alpha, const std::function<double(double)>& mmse_x) {
    if (!(delta > 0.0) || !(alpha > 0.0)) throw DomainError("delta and alpha must be positive");
    const double da = delta * alpha;
    if (da >= 1.0) throw DomainError("delta*alpha must be below 1");
    const double g = da / (1.0 - da);
    return (1.0 - g * mmse_x(g)) / (1.0 - da);
}

double fisher_composite_noise_gaussian(double power, double delta, double alpha) {
    if (!(power > 0.0)) throw DomainError("power must be positive");
    return fisher_composite_noise(delta, alpha, [power](double g) { return mmse_gaussian(power, g); });
}

WeakSnrParams make_weak_snr_params(double delta, double alpha) {
    if (!(delta > 0.0) || !(alpha > 0.0)) throw DomainError("delta and alpha must be positive");
    WeakSnrParams w;
    w.delta = delta;
    w.alpha = alpha;
    w.delta_prime = delta * alpha / (1.0 + delta * alpha);
    w.delta_hat = delta / (1.0 + alpha * delta);
    return w;
}

double weak_snr_lower_bound(double tr_cov, double lambda_max, const WeakSnrParams& w) {
    if (!(tr_cov >= 0.0) || !(lambda_max >= 0.0)) throw DomainError("trace and lambda_max must be non-negative");
    return w.delta_prime / (2.0 * w.alpha) * tr_cov - 0.5 * w.delta_prime * w.delta_prime * lambda_max * tr_cov;
}

std::function<double(double)> mmse_scaled_signal(double c, std::function<double(double)> mmse_fn) {
    if (!(c > 0.0)) throw DomainError("scale must be positive");
    return [c, fn = std::move(mmse_fn)](double gamma) { return c * fn(c * gamma); };
}

double mi_gaussian_composite_weak(std::span<const double> cov_z_eigenvalues, double delta, double alpha,
                                  double power_x) {
    if (!(delta > 0.0) || !(alpha > 0.0)) throw DomainError("delta and alpha must be positive");
    if (delta * alpha >= 1.0) throw DomainError("delta*alpha must be below 1");
    if (cov_z_eigenvalues.empty()) throw InvalidArgument("covariance spectrum is empty");
    const double noise_var = delta * alpha * power_x + (1.0 - delta * alpha);
    double sum = 0.0;
    for (double lam : cov_z_eigenvalues) {
        if (!(lam >= 0.0)) throw DomainError("covariance eigenvalues must be non-negative");
        sum += 0.5 * std::log1p(delta * lam / noise_var);
    }
    return sum / static_cast<double>(cov_z_eigenvalues.size());
}

}  // namespace imlab
