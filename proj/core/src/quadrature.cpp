#include "infoplan/quadrature.hpp"

#include "infoplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace infoplan {

std::vector<double> GaussHermiteRule::normalized_weights() const {
    std::vector<double> out(weights);
    const double inv = 1.0 / std::sqrt(std::numbers::pi);
    for (double& w : out) w *= inv;
    return out;
}

// Newton iteration on the orthonormal Hermite recurrence, with the classic
// asymptotic starting guesses for the largest roots and extrapolation for the
// rest. Roots are symmetric, so only the positive half is computed.
GaussHermiteRule gauss_hermite(int node_count) {
    if (node_count < 1) throw InvalidInput("gauss_hermite: node_count must be >= 1");
    const int n = node_count;
    const int half = (n + 1) / 2;
    const double pim4 = std::pow(std::numbers::pi, -0.25);

    GaussHermiteRule rule;
    rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
    rule.weights.assign(static_cast<std::size_t>(n), 0.0);

    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[static_cast<std::size_t>(i - 2)];
        }

        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = z;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
        const double w = 2.0 / (pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    // Built largest-first; flip to ascending.
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace infoplan
