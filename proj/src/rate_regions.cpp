#include "imlab/rate_regions.hpp"

#include <cmath>

#include "imlab/errors.hpp"

namespace imlab {

namespace {

void check_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be non-negative and finite");
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw RangeError("beta must lie in [0, 1]");
}

void check_weak_gain(double a, const char* name) {
    if (!(a >= 0.0 && a < 1.0)) throw RangeError(std::string(name) + " must lie in [0, 1) for weak interference");
}

double half_log1p(double x) { return 0.5 * std::log1p(x); }

}  // namespace

MacInterferenceParams make_mac_params(double snr1, double snr2, double snr_z, double a) {
    check_nonneg(snr1, "snr1");
    check_nonneg(snr2, "snr2");
    check_nonneg(snr_z, "snr_z");
    check_nonneg(a, "a");
    return MacInterferenceParams{snr1, snr2, snr_z, a};
}

double mac_mmse_threshold(const MacInterferenceParams& p) {
    return p.a * p.snr_z / (1.0 + p.snr1 + p.snr2);
}

MacRatePoint mac_weak_boundary(const MacInterferenceParams& p, double beta) {
    check_weak_gain(p.a, "a");
    check_beta(beta);
    MacRatePoint r;
    r.r1 = half_log1p(beta * p.snr1);
    r.r2 = half_log1p(((1.0 - beta) * p.snr1 + p.snr2) / (1.0 + beta * p.snr1));
    r.rz = half_log1p(p.a * p.snr_z / (1.0 + p.snr1 + p.snr2));
    return r;
}

CascadeParams make_cascade_params(double snr1, double snr2, double snr3) {
    check_nonneg(snr1, "snr1");
    check_nonneg(snr2, "snr2");
    check_nonneg(snr3, "snr3");
    return CascadeParams{snr1, snr2, snr3};
}

double intermediate_node_limit(const CascadeParams& p, double a2, double a3) {
    check_weak_gain(a2, "a2");
    check_weak_gain(a3, "a3");
    const double to_first = half_log1p(a2 * p.snr2 / (1.0 + p.snr1));
    const double own = half_log1p(p.snr2 / (1.0 + a3 * p.snr3));
    return std::min(to_first, own);
}

CascadeRatePoint cascade_boundary(const CascadeParams& p, double a, double beta) {
    check_weak_gain(a, "a");
    check_beta(beta);
    CascadeRatePoint r;
    r.r1 = half_log1p(p.snr1);
    r.r2 = half_log1p(beta * a * p.snr2 / (1.0 + p.snr1));
    r.r3 = half_log1p(((1.0 - beta) * a * p.snr2 + a * a * p.snr3) / (1.0 + p.snr1 + beta * a * p.snr2));
    return r;
}

CascadeBounds cascade_sum_and_individual_bounds(const CascadeParams& p, double a) {
    check_weak_gain(a, "a");
    CascadeBounds b;
    b.sum = half_log1p((a * p.snr2 + a * a * p.snr3) / (1.0 + p.snr1));
    b.r2_bound = half_log1p(a * p.snr2 / (1.0 + p.snr1));
    b.r3_bound = half_log1p(a * a * p.snr3 / (1.0 + p.snr1));
    return b;
}

}  // namespace imlab
