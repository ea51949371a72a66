#include "support/oracles.hpp"

#include "infoplan/errors.hpp"
#include "infoplan/info_value.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace infoplan;

namespace {

GaussianBelief belief_1d(double mean, double var) {
    return GaussianBelief({{0, 0}}, Eigen::VectorXd::Constant(1, mean), Eigen::MatrixXd::Constant(1, 1, var));
}

GaussianBelief random_belief(std::size_t n, Rng& rng) {
    std::vector<Location> q;
    for (std::size_t i = 0; i < n; ++i) q.push_back({static_cast<double>(i), 0.0});
    Eigen::VectorXd mu(n);
    for (std::size_t i = 0; i < n; ++i) mu(i) = rng.normal();
    return GaussianBelief(q, mu, oracle::random_spd(n, rng));
}

}  // namespace

TEST_CASE("kl_gaussian hand cases") {
    CHECK(std::abs(kl_gaussian(belief_1d(1.0, 1.0), belief_1d(0.0, 1.0)) - 0.5) <= 1e-12);

    Rng rng(3);
    const GaussianBelief p = random_belief(6, rng);
    CHECK(std::abs(kl_gaussian(p, p)) <= 1e-12);

    // 1-D closed form with different variances
    const double kl = kl_gaussian(belief_1d(0.3, 0.5), belief_1d(-0.2, 2.0));
    const double expect = 0.5 * (0.5 / 2.0 - std::log(0.5 / 2.0) - 1.0 + 0.25 / 2.0);
    CHECK(std::abs(kl - expect) <= 1e-12);
}

TEST_CASE("kl_gaussian rejects mismatched beliefs") {
    Rng rng(4);
    CHECK_THROWS_AS(kl_gaussian(random_belief(3, rng), random_belief(2, rng)), InvalidInput);
    const GaussianBelief a({{0, 0}}, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
    const GaussianBelief b({{1, 0}}, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
    CHECK_THROWS_AS(kl_gaussian(a, b), InvalidInput);
}

TEST_CASE("kl_gaussian is infinite for a singular post-measurement belief") {
    CHECK(std::isinf(kl_gaussian(belief_1d(0.0, 0.0), belief_1d(0.0, 1.0))));
}

TEST_CASE("kl_gaussian matches a Monte-Carlo log-ratio estimate") {
    Rng rng(1234);
    const GaussianBelief p = random_belief(4, rng);
    const GaussianBelief q = random_belief(4, rng);
    const double kl = kl_gaussian(p, q);
    const auto mc = oracle::monte_carlo_kl(p, q, 200'000, 77);
    CHECK(std::abs(kl - mc.mean) <= 3.0 * mc.stderr_);
}

TEST_CASE("edg_exact scalar hand computation") {
    // k = 0, one target at the candidate, m = 0, sf2 = 1, sigma = 1:
    // structural = 1/2 [1/2 - ln 1/2 - 1], mean shift = 1/2 (a^2/1) * 2 with a = 1/2.
    const std::vector<Location> t{{0.0, 0.0}};
    const EDGResult r = edg_exact(MeanSpec{0.0}, KernelSpec{1.0, 1.0, 0.0}, MeasurementLog(1.0), {0.0, 0.0}, t);
    const double structural = 0.5 * (0.5 - std::log(0.5) - 1.0);
    CHECK(std::abs(r.structural_term - structural) <= 1e-14);
    CHECK(std::abs(r.mean_shift_term - 0.25) <= 1e-14);
    CHECK(std::abs(r.value - 0.346573590279973) <= 1e-12);
    CHECK(std::abs(r.value - edg_quadrature(MeanSpec{0.0}, KernelSpec{1.0, 1.0, 0.0}, MeasurementLog(1.0),
                                            {0.0, 0.0}, t)) <= 1e-12);
}

TEST_CASE("a candidate far from every target and logged point carries no information") {
    const KernelSpec k{2.0, 0.1, 0.0};
    MeasurementLog log(0.5);
    log.append({0.2, 0.2}, 1.0);
    const std::vector<Location> t{{0.0, 0.0}, {0.3, 0.1}};
    const Location far{5.0, 5.0};  // 50 lengthscales away
    const EDGResult r = edg_exact(MeanSpec{0.0}, k, log, far, t);
    CHECK(r.value <= 1e-10);
    CHECK(r.value >= 0.0);
    // zero gain: quadrature of a constant integrand returns the structural term
    for (int n : {1, 2, 7, 64}) {
        CHECK(edg_quadrature(MeanSpec{0.0}, k, log, far, t, QuadratureSpec{n}) == doctest::Approx(r.structural_term));
    }
}

TEST_CASE("edg_exact agrees with the quadrature oracle on random instances") {
    Rng rng(8080);
    for (int rep = 0; rep < 50; ++rep) {
        const double noise = rep % 2 ? 1.0 : 0.1;
        const auto in = oracle::random_instance(rng, 10, 8, noise);
        const EDGResult r = edg_exact(in.mean, in.kernel, in.log, in.candidate, in.targets);
        const double q64 = edg_quadrature(in.mean, in.kernel, in.log, in.candidate, in.targets, {64});
        const double q32 = edg_quadrature(in.mean, in.kernel, in.log, in.candidate, in.targets, {32});
        CHECK(oracle::rel_diff(r.value, q64) <= 1e-8);
        CHECK(std::abs(q32 - q64) <= 1e-10 * std::max(1.0, std::abs(q64)));
        CHECK(std::abs(r.value - (r.structural_term + r.mean_shift_term)) <= 1e-12);
        CHECK(r.value >= -1e-10);
        CHECK(r.mean_shift_term >= 0.0);
    }
}

TEST_CASE("structural term equals the KL evaluated at the predictive mean reading") {
    Rng rng(55);
    for (int rep = 0; rep < 20; ++rep) {
        const auto in = oracle::random_instance(rng, 8, 6, 0.5);
        const EDGResult r = edg_exact(in.mean, in.kernel, in.log, in.candidate, in.targets);
        const Predictive pred = predictive_measurement(in.mean, in.kernel, in.log, in.candidate, true);
        const GaussianBelief prev = posterior(in.mean, in.kernel, in.log, in.targets);
        const GaussianBelief post =
            posterior(in.mean, in.kernel, in.log.extended(in.candidate, pred.mean), in.targets);
        CHECK(std::abs(kl_gaussian(post, prev) - r.structural_term) <= 1e-10 * std::max(1.0, r.structural_term));
    }
}

TEST_CASE("edg_exact gain vector reproduces the post-measurement mean") {
    Rng rng(56);
    const auto in = oracle::random_instance(rng, 6, 5, 0.3);
    const EdgScorer scorer(in.mean, in.kernel, in.log, in.targets);
    const auto g = scorer.gain(in.candidate);
    const double z = g.mu_z + 1.3;
    const GaussianBelief post = posterior(in.mean, in.kernel, in.log.extended(in.candidate, z), in.targets);
    const Eigen::VectorXd shift = post.mean() - scorer.current_belief().mean();
    CHECK(oracle::max_rel_diff(shift, g.a * 1.3) <= 1e-9);
}

TEST_CASE("edg_exact is invariant to the order of the log") {
    Rng rng(57);
    for (int rep = 0; rep < 10; ++rep) {
        const auto in = oracle::random_instance(rng, 8, 8, 1.0, 2);
        MeasurementLog rev(in.log.noise_sd());
        for (std::size_t i = in.log.size(); i-- > 0;) rev.append(in.log.locations()[i], in.log.values()[i]);
        const double a = edg_exact(in.mean, in.kernel, in.log, in.candidate, in.targets).value;
        const double b = edg_exact(in.mean, in.kernel, rev, in.candidate, in.targets).value;
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
    }
}

TEST_CASE("repeating a measurement yields diminishing returns") {
    Rng rng(58);
    for (int rep = 0; rep < 20; ++rep) {
        auto in = oracle::random_instance(rng, 8, 5, rep % 2 ? 1.0 : 0.2);
        const double first = edg_exact(in.mean, in.kernel, in.log, in.candidate, in.targets).value;
        const MeasurementLog after = in.log.extended(in.candidate, in.mean.constant);
        const double second = edg_exact(in.mean, in.kernel, after, in.candidate, in.targets).value;
        CHECK(second < first);
    }
}

TEST_CASE("edg_paper_form is finite, deterministic, and falls back for an empty log") {
    Rng rng(59);
    for (int rep = 0; rep < 20; ++rep) {
        const auto in = oracle::random_instance(rng, 8, 6, 1.0, 1);
        const PaperEDGResult a = edg_paper_form(in.mean, in.kernel, in.log, in.candidate, in.targets);
        const PaperEDGResult b = edg_paper_form(in.mean, in.kernel, in.log, in.candidate, in.targets);
        CHECK(std::isfinite(a.value));
        CHECK(a.value == b.value);
        REQUIRE(a.terms.has_value());
        const auto k = static_cast<Eigen::Index>(in.log.size());
        const auto nv = static_cast<Eigen::Index>(in.targets.size());
        CHECK(a.terms->m1.rows() == nv);
        CHECK(a.terms->m1.cols() == k);
        CHECK(a.terms->m2.cols() == k + 1);
        CHECK(a.terms->v2.size() == k + 1);
        CHECK(a.terms->v2.head(k) == a.terms->v1);
        CHECK_FALSE(a.fell_back_to_exact);
    }

    const std::vector<Location> t{{0.1, 0.1}, {0.4, 0.3}};
    const MeasurementLog empty(1.0);
    const PaperEDGResult r = edg_paper_form(MeanSpec{0.0}, KernelSpec{1.0, 0.3, 0.0}, empty, {0.2, 0.2}, t);
    CHECK(r.fell_back_to_exact);
    CHECK_FALSE(r.terms.has_value());
    CHECK(r.value == edg_exact(MeanSpec{0.0}, KernelSpec{1.0, 0.3, 0.0}, empty, {0.2, 0.2}, t).value);
}

TEST_CASE("edg_paper_form quadratic term vanishes at the predictive mean reading") {
    // M1 V1 and M2 V2 are the posterior mean shifts before and after a reading
    // equal to its own prediction, so their difference is zero.
    Rng rng(60);
    const auto in = oracle::random_instance(rng, 8, 6, 1.0, 2);
    const PaperEDGResult r = edg_paper_form(in.mean, in.kernel, in.log, in.candidate, in.targets);
    CHECK(std::abs(r.terms->quadratic_term) <= 1e-8);
}

TEST_CASE("empty target set is rejected") {
    const std::vector<Location> none;
    CHECK_THROWS_AS(edg_exact(MeanSpec{}, KernelSpec{}, MeasurementLog(1.0), {0, 0}, none), InvalidInput);
    CHECK_THROWS_AS(edg_quadrature(MeanSpec{}, KernelSpec{}, MeasurementLog(1.0), {0, 0}, none), InvalidInput);
}
