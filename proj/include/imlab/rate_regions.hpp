#pragma once

namespace imlab {

// Two-user MAC with an additional one-directional interferer of gain a.
struct MacInterferenceParams {
    double snr1 = 0.0;
    double snr2 = 0.0;
    double snr_z = 0.0;
    double a = 0.0;
};

MacInterferenceParams make_mac_params(double snr1, double snr2, double snr_z, double a);

struct MacRatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
    double rz = 0.0;
};

// SNR at which the interference must be fully resolvable:
// a*snr_z / (1 + snr1 + snr2).
double mac_mmse_threshold(const MacInterferenceParams& p);

// Boundary rates for weak interference (a in [0,1)), parametrized by
// beta in [0,1]. R1 + R2 is constant in beta.
MacRatePoint mac_weak_boundary(const MacInterferenceParams& p, double beta);

// Cascade of three one-directional interference pairs.
struct CascadeParams {
    double snr1 = 0.0;
    double snr2 = 0.0;
    double snr3 = 0.0;
};

CascadeParams make_cascade_params(double snr1, double snr2, double snr3);

struct CascadeRatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

// Rate cap of a transmitter inserted between two working pairs with gains
// a2 (toward the first receiver) and a3 (from the third transmitter).
double intermediate_node_limit(const CascadeParams& p, double a2, double a3);

// Boundary rates when interference decays geometrically with gain a in [0,1),
// parametrized by beta in [0,1]. R2 + R3 is constant in beta.
CascadeRatePoint cascade_boundary(const CascadeParams& p, double a, double beta);

struct CascadeBounds {
    double sum = 0.0;       // R2 + R3
    double r2_bound = 0.0;  // genie-aided individual bounds
    double r3_bound = 0.0;
};

CascadeBounds cascade_sum_and_individual_bounds(const CascadeParams& p, double a);

}  // namespace imlab
