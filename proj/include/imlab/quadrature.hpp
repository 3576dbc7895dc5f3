#pragma once

#include <vector>

namespace imlab {

// Gauss-Hermite rule in probabilists' form: E[f(N)] for N ~ N(0,1) is
// approximated by sum_i weights[i] * f(nodes[i]); weights sum to 1.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached per order. Nodes and weights come from the symmetric tridiagonal
// recurrence matrix (Golub-Welsch).
const GaussHermiteRule& gauss_hermite(int order);

}  // namespace imlab
