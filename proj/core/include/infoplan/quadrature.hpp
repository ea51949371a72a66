#pragma once

#include <vector>

namespace infoplan {

/// Gauss-Hermite rule for the weight exp(-t^2).
struct QuadratureSpec {
    int node_count = 64;
};

struct GaussHermiteRule {
    std::vector<double> nodes;
    /// Raw weights; they sum to sqrt(pi).
    std::vector<double> weights;

    /// Weights divided by sqrt(pi), i.e. the rule for E[g(Z)] with Z ~ N(0, 1/2).
    std::vector<double> normalized_weights() const;
};

/// Nodes in ascending order. Throws InvalidInput for node_count < 1.
GaussHermiteRule gauss_hermite(int node_count);

}  // namespace infoplan
