#include "imlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "imlab/errors.hpp"
#include "imlab/linalg.hpp"

namespace imlab {

namespace {

GaussHermiteRule build_rule(int order) {
    Matrix j(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        j(k - 1, k) = b;
        j(k, k - 1) = b;
    }
    SymEigen e = sym_eigen(j);

    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    std::vector<int> order_idx(order);
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::sort(order_idx.begin(), order_idx.end(), [&](int a, int b) { return e.values[a] < e.values[b]; });
    for (int i = 0; i < order; ++i) {
        const int k = order_idx[i];
        rule.nodes[i] = e.values[k];
        rule.weights[i] = e.vectors(0, k) * e.vectors(0, k);
    }
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1 || order > 200) throw DomainError("quadrature order must be in [1, 200]");
    static std::map<int, GaussHermiteRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

}  // namespace imlab
