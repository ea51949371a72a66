#include "infoplan/info_value.hpp"

#include "infoplan/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace infoplan {

namespace {

void require_targets(std::span<const Location> targets) {
    if (targets.empty()) throw InvalidInput("target set is empty");
}

std::vector<Location> checked_targets(std::span<const Location> targets) {
    require_targets(targets);
    return {targets.begin(), targets.end()};
}

double log_det(const SpdFactor& f) {
    return 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

double kl_gaussian(const GaussianBelief& p, const GaussianBelief& q, double base_jitter) {
    if (p.dim() != q.dim()) throw InvalidInput("kl_gaussian: beliefs have different dimensions");
    if (p.query() != q.query()) throw InvalidInput("kl_gaussian: beliefs are over different query lists");
    if (p.dim() == 0) return 0.0;

    const SpdFactor fq = factorize_spd(q.cov(), base_jitter);
    const auto l = fq.llt.matrixL();

    // B = L^-1 P L^-T has the same spectrum as Q^-1 P, and
    // tr(Q^-1 P) - n - ln det(Q^-1 P) = sum_i (lambda_i - 1 - ln lambda_i).
    Eigen::MatrixXd b = p.cov();
    l.solveInPlace(b);
    Eigen::MatrixXd bt = b.transpose();
    l.solveInPlace(bt);
    bt = 0.5 * (bt + bt.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bt, Eigen::EigenvaluesOnly);
    double cov_part = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lambda = es.eigenvalues()(i);
        if (!(lambda > 0.0)) return std::numeric_limits<double>::infinity();
        const double delta = lambda - 1.0;
        cov_part += delta - std::log1p(delta);
    }

    Eigen::VectorXd dmu = p.mean() - q.mean();
    l.solveInPlace(dmu);
    return 0.5 * (cov_part + dmu.squaredNorm());
}

// ---------------------------------------------------------------------------

EdgScorer::EdgScorer(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                     std::span<const Location> targets)
    : targets_(checked_targets(targets)),
      cond_(mean, kernel, log),
      belief_(cond_.belief(targets_)),
      belief_factor_(factorize_spd(belief_.cov(), kernel.jitter)) {}

EdgScorer::Gain EdgScorer::gain(const Location& candidate) const {
    const Predictive pred = cond_.predictive(candidate, true);
    Gain g;
    g.mu_z = pred.mean;
    g.var_z = pred.variance;
    const std::span<const Location> c(&candidate, 1);
    Eigen::VectorXd cross = cond_.posterior_cov(targets_, c).col(0);
    g.a = pred.variance > 0.0 ? Eigen::VectorXd(cross / pred.variance)
                              : Eigen::VectorXd::Zero(cross.size());
    return g;
}

EDGResult EdgScorer::score(const Location& candidate) const {
    const Predictive pred = cond_.predictive(candidate, true);
    if (!(pred.variance > 0.0)) return {};  // reading is already determined

    const std::span<const Location> c(&candidate, 1);
    const Eigen::VectorXd cross = cond_.posterior_cov(targets_, c).col(0);
    // Post-measurement covariance is S - c c^T / v, so with q = c^T S^-1 c / v:
    //   tr(S^-1 S_post) - N = -q,  det(S_post)/det(S) = 1 - q,
    //   E[mean shift quadratic] = a^T S^-1 a v = q.
    const double q = cross.dot(belief_factor_.llt.solve(cross)) / pred.variance;

    EDGResult r;
    r.mean_shift_term = 0.5 * q;
    if (q >= 1.0) {
        r.structural_term = std::numeric_limits<double>::infinity();
    } else {
        r.structural_term = 0.5 * (-q - std::log1p(-q));
    }
    r.value = r.structural_term + r.mean_shift_term;
    return r;
}

EDGResult edg_exact(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                    const Location& candidate, std::span<const Location> targets) {
    return EdgScorer(mean, kernel, log, targets).score(candidate);
}

double edg_quadrature(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                      const Location& candidate, std::span<const Location> targets,
                      const QuadratureSpec& quad) {
    require_targets(targets);
    const GaussHermiteRule rule = gauss_hermite(quad.node_count);
    const std::vector<double> w = rule.normalized_weights();

    const Conditioner cond(mean, kernel, log);
    const GaussianBelief prev = cond.belief(targets);
    const Predictive pred = cond.predictive(candidate, true);
    const double spread = std::sqrt(2.0 * pred.variance);

    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = pred.mean + spread * rule.nodes[i];
        const GaussianBelief post = posterior(mean, kernel, log.extended(candidate, z), targets);
        acc += w[i] * kl_gaussian(post, prev, kernel.jitter);
    }
    return acc;
}

PaperEDGResult edg_paper_form(const MeanSpec& mean, const KernelSpec& kernel,
                              const MeasurementLog& log, const Location& candidate,
                              std::span<const Location> targets) {
    require_targets(targets);
    if (log.empty()) {
        PaperEDGResult r;
        r.value = edg_exact(mean, kernel, log, candidate, targets).value;
        r.fell_back_to_exact = true;
        return r;
    }

    const double s2 = log.noise_sd() * log.noise_sd();
    const auto y_prev = log.locations();
    std::vector<Location> y_next(y_prev.begin(), y_prev.end());
    y_next.push_back(candidate);
    const auto n_v = static_cast<double>(targets.size());

    const Conditioner cond(mean, kernel, log);
    const GaussianBelief prev = cond.belief(targets);
    const SpdFactor f_prev = factorize_spd(prev.cov(), kernel.jitter);
    const Predictive pred = cond.predictive(candidate, false);

    PaperEDGTerms t;
    {
        Eigen::MatrixXd a = kernel_matrix(kernel, y_prev, y_prev);
        a.diagonal().array() += s2;
        const SpdFactor fa = factorize_spd(a, kernel.jitter);
        t.m1 = fa.llt.solve(kernel_matrix(kernel, y_prev, targets)).transpose();
    }
    {
        Eigen::MatrixXd a = kernel_matrix(kernel, y_next, y_next);
        a.diagonal().array() += s2;
        const SpdFactor fa = factorize_spd(a, kernel.jitter);
        t.m2 = fa.llt.solve(kernel_matrix(kernel, y_next, targets)).transpose();
    }
    const auto k_prev = static_cast<Eigen::Index>(y_prev.size());
    t.v1.resize(k_prev);
    for (Eigen::Index i = 0; i < k_prev; ++i)
        t.v1(i) = log.values()[static_cast<std::size_t>(i)] - mean(y_prev[static_cast<std::size_t>(i)]);
    t.v2.resize(k_prev + 1);
    t.v2.head(k_prev) = t.v1;
    t.v2(k_prev) = pred.mean - mean(candidate);
    t.sigma_z = pred.variance;

    // Post-measurement covariance does not depend on the reading.
    const GaussianBelief next = posterior(mean, kernel, log.extended(candidate, pred.mean), targets);
    const SpdFactor f_next = factorize_spd(next.cov(), kernel.jitter);
    t.trace_term = f_prev.llt.solve(next.cov()).trace();
    t.log_det_ratio = log_det(f_next) - log_det(f_prev);

    const Eigen::VectorXd u1 = t.m1 * t.v1;
    const Eigen::VectorXd u2 = t.m2 * t.v2;
    t.quadratic_term = u1.dot(f_prev.llt.solve(u1 - 2.0 * u2)) + u2.dot(f_prev.llt.solve(u2));
    const Eigen::MatrixXd g = t.m2.transpose() * f_prev.llt.solve(t.m2);
    t.d = g(g.rows() - 1, g.cols() - 1);

    const double sp = std::sqrt(std::numbers::pi);
    const double s = t.sigma_z;
    PaperEDGResult r;
    r.value = 0.25 * t.d * s * s * s * sp +
              0.5 * s * sp * (t.trace_term - t.log_det_ratio - n_v + t.quadratic_term);
    r.terms = std::move(t);
    return r;
}

}  // namespace infoplan
