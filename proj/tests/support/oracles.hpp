#pragma once

// Independent reference computations for tests. These deliberately avoid the
// library's Cholesky/rank-one paths: dense explicit inverses, scalar Kalman
// updates and Monte-Carlo estimates.

#include "infoplan/gp.hpp"
#include "infoplan/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

using infoplan::GaussianBelief;
using infoplan::KernelSpec;
using infoplan::Location;
using infoplan::MeanSpec;
using infoplan::MeasurementLog;

inline Eigen::MatrixXd dense_kernel(const KernelSpec& k, const std::vector<Location>& a,
                                    const std::vector<Location>& b) {
    Eigen::MatrixXd m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double dx = a[i].x - b[j].x, dy = a[i].y - b[j].y;
            m(i, j) = k.signal_variance * std::exp(-(dx * dx + dy * dy) / (2 * k.lengthscale * k.lengthscale));
        }
    return m;
}

struct Dense {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

/// Posterior via an explicit inverse of K(Y,Y) + s^2 I.
inline Dense dense_posterior(const MeanSpec& m, const KernelSpec& k, const MeasurementLog& log,
                             const std::vector<Location>& xs) {
    const std::vector<Location> ys(log.locations().begin(), log.locations().end());
    Dense out;
    out.mean = Eigen::VectorXd::Constant(xs.size(), m.constant);
    out.cov = dense_kernel(k, xs, xs);
    if (ys.empty()) return out;
    Eigen::MatrixXd a = dense_kernel(k, ys, ys);
    a.diagonal().array() += log.noise_sd() * log.noise_sd();
    const Eigen::MatrixXd inv = a.inverse();
    const Eigen::MatrixXd kxy = dense_kernel(k, xs, ys);
    Eigen::VectorXd r(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) r(i) = log.values()[i] - m.constant;
    out.mean += kxy * inv * r;
    out.cov -= kxy * inv * kxy.transpose();
    return out;
}

/// Condition one measurement at a time with scalar Kalman updates on the
/// joint belief over the query points and the logged locations.
inline Dense sequential_posterior(const MeanSpec& m, const KernelSpec& k, const MeasurementLog& log,
                                  const std::vector<Location>& xs) {
    std::vector<Location> all = xs;
    all.insert(all.end(), log.locations().begin(), log.locations().end());
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(all.size(), m.constant);
    Eigen::MatrixXd s = dense_kernel(k, all, all);
    const double s2 = log.noise_sd() * log.noise_sd();
    for (std::size_t i = 0; i < log.size(); ++i) {
        const Eigen::Index j = static_cast<Eigen::Index>(xs.size() + i);
        const double v = s(j, j) + s2;
        const Eigen::VectorXd g = s.col(j) / v;
        mu += g * (log.values()[i] - mu(j));
        s -= g * s.col(j).transpose();
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    return {mu.head(n), s.topLeftCorner(n, n)};
}

inline double gaussian_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd inv = cov.inverse();
    const Eigen::VectorXd d = x - mu;
    const double n = static_cast<double>(x.size());
    return -0.5 * (d.dot(inv * d) + std::log(cov.determinant()) + n * std::log(2 * std::numbers::pi));
}

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// E_P[ln p(x) - ln q(x)] by sampling from P.
inline McEstimate monte_carlo_kl(const GaussianBelief& p, const GaussianBelief& q, std::size_t samples,
                                 std::uint64_t seed) {
    infoplan::Rng rng(seed);
    const Eigen::MatrixXd lp = p.cov().llt().matrixL();
    const Eigen::MatrixXd pinv = p.cov().inverse();
    const Eigen::MatrixXd qinv = q.cov().inverse();
    const double half_logdet_ratio = 0.5 * (std::log(q.cov().determinant()) - std::log(p.cov().determinant()));
    const auto n = p.dim();
    Eigen::VectorXd e(n);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) e(i) = rng.normal();
        const Eigen::VectorXd x = p.mean() + lp * e;
        const Eigen::VectorXd dp = x - p.mean();
        const Eigen::VectorXd dq = x - q.mean();
        const double v = half_logdet_ratio - 0.5 * dp.dot(pinv * dp) + 0.5 * dq.dot(qinv * dq);
        sum += v;
        sumsq += v * v;
    }
    const double ns = static_cast<double>(samples);
    const double mean = sum / ns;
    const double var = (sumsq - ns * mean * mean) / (ns - 1.0);
    return {mean, std::sqrt(var / ns)};
}

/// Random SPD matrix A A^T + eps I.
inline Eigen::MatrixXd random_spd(std::size_t n, infoplan::Rng& rng, double eps = 0.1) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
    Eigen::MatrixXd out = a * a.transpose() / static_cast<double>(n);
    out.diagonal().array() += eps;
    return out;
}

inline std::vector<Location> random_points(std::size_t n, infoplan::Rng& rng, double lo = 0.0, double hi = 1.0) {
    std::vector<Location> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    return pts;
}

/// A random GP scoring problem: hyperparameters, a log of k noisy readings,
/// targets and a candidate, all inside the unit square.
struct Instance {
    KernelSpec kernel;
    MeanSpec mean;
    MeasurementLog log{0.0};
    std::vector<Location> targets;
    Location candidate;
};

inline Instance random_instance(infoplan::Rng& rng, std::size_t max_targets, std::size_t max_log,
                                double noise_sd, std::size_t min_log = 0) {
    Instance in;
    in.kernel = KernelSpec{rng.uniform(0.5, 4.0), rng.uniform(0.15, 0.5), 0.0};
    in.mean = MeanSpec{rng.uniform(-2.0, 2.0)};
    const std::size_t nt = 1 + rng.index(max_targets);
    const std::size_t nk = min_log + rng.index(max_log - min_log + 1);
    in.targets = random_points(nt, rng);
    in.log = MeasurementLog(noise_sd);
    for (std::size_t i = 0; i < nk; ++i)
        in.log.append({rng.uniform(), rng.uniform()}, in.mean.constant + rng.normal(0.0, 1.5));
    in.candidate = {rng.uniform(), rng.uniform()};
    return in;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace oracle
