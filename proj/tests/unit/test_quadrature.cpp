#include "infoplan/errors.hpp"
#include "infoplan/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace infoplan;

TEST_CASE("Gauss-Hermite weights sum to sqrt(pi)") {
    for (int n : {1, 2, 3, 5, 8, 16, 32, 64, 100}) {
        const auto rule = gauss_hermite(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        const double sum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
        CHECK(std::abs(sum - std::sqrt(std::numbers::pi)) <= 1e-12);
        const auto w = rule.normalized_weights();
        CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0) <= 1e-12);
        CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    }
}

TEST_CASE("Gauss-Hermite integrates low-order moments exactly") {
    // With weight exp(-t^2)/sqrt(pi): E[t^2] = 1/2, E[t^4] = 3/4, odd moments 0.
    for (int n : {3, 10, 64}) {
        const auto rule = gauss_hermite(n);
        const auto w = rule.normalized_weights();
        double m1 = 0, m2 = 0, m4 = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double t = rule.nodes[i];
            m1 += w[i] * t;
            m2 += w[i] * t * t;
            m4 += w[i] * t * t * t * t;
        }
        CHECK(std::abs(m1) <= 1e-13);
        CHECK(std::abs(m2 - 0.5) <= 1e-13);
        CHECK(std::abs(m4 - 0.75) <= 1e-12);
    }
}

TEST_CASE("single-node rule sits at zero") {
    const auto rule = gauss_hermite(1);
    CHECK(rule.nodes[0] == 0.0);
    CHECK_THROWS_AS(gauss_hermite(0), InvalidInput);
}
