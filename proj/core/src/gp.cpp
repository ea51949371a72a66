#include "infoplan/gp.hpp"

#include "infoplan/errors.hpp"
#include "infoplan/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace infoplan {

bool is_finite(const Location& p) noexcept {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

double squared_distance(const Location& a, const Location& b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

void KernelSpec::validate() const {
    if (!(signal_variance > 0.0) || !std::isfinite(signal_variance))
        throw InvalidInput("kernel signal_variance must be finite and > 0");
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale))
        throw InvalidInput("kernel lengthscale must be finite and > 0");
    if (!(jitter >= 0.0) || !std::isfinite(jitter))
        throw InvalidInput("kernel jitter must be finite and >= 0");
}

double KernelSpec::operator()(const Location& a, const Location& b) const noexcept {
    return signal_variance * std::exp(-squared_distance(a, b) / (2.0 * lengthscale * lengthscale));
}

void MeanSpec::validate() const {
    if (!std::isfinite(constant)) throw InvalidInput("mean constant must be finite");
}

// ---------------------------------------------------------------------------

MeasurementLog::MeasurementLog(double noise_sd) : noise_sd_(noise_sd) {
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
        throw InvalidInput("noise_sd must be finite and >= 0");
}

void MeasurementLog::append(const Location& where, double value) {
    if (!is_finite(where)) throw InvalidInput("measurement location is not finite");
    if (!std::isfinite(value)) throw InvalidInput("measurement value is not finite");
    locations_.push_back(where);
    values_.push_back(value);
}

MeasurementLog MeasurementLog::extended(const Location& where, double value) const {
    MeasurementLog out = *this;
    out.append(where, value);
    return out;
}

// ---------------------------------------------------------------------------

GaussianBelief::GaussianBelief(std::vector<Location> query, Eigen::VectorXd mean,
                               Eigen::MatrixXd cov)
    : query_(std::move(query)), mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto n = static_cast<Eigen::Index>(query_.size());
    if (mean_.size() != n || cov_.rows() != n || cov_.cols() != n)
        throw InvalidInput("belief dimensions disagree: query, mean and cov must match");
    if (n == 0) return;
    const double scale = cov_.cwiseAbs().maxCoeff();
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-10 * std::max(scale, std::numeric_limits<double>::min())) && asym != 0.0)
        throw InvalidInput("belief covariance is not symmetric");
}

GaussianBelief GaussianBelief::restrict(std::span<const std::size_t> indices) const {
    const auto m = static_cast<Eigen::Index>(indices.size());
    std::vector<Location> q;
    q.reserve(indices.size());
    Eigen::VectorXd mu(m);
    Eigen::MatrixXd s(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto a = indices[static_cast<std::size_t>(i)];
        if (a >= query_.size()) throw InvalidInput("restriction index out of range");
        q.push_back(query_[a]);
        mu(i) = mean_(static_cast<Eigen::Index>(a));
        for (Eigen::Index j = 0; j < m; ++j)
            s(i, j) = cov_(static_cast<Eigen::Index>(a),
                           static_cast<Eigen::Index>(indices[static_cast<std::size_t>(j)]));
    }
    return GaussianBelief(std::move(q), std::move(mu), std::move(s));
}

bool is_psd(const Eigen::MatrixXd& m, double floor_rel) {
    if (m.rows() == 0) return true;
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const double tr = std::abs(sym.trace());
    return es.eigenvalues().minCoeff() >= -floor_rel * tr / static_cast<double>(m.rows());
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const Location> xs,
                              std::span<const Location> ys) {
    for (const auto& p : xs)
        if (!is_finite(p)) throw InvalidInput("kernel_matrix: non-finite coordinate");
    for (const auto& p : ys)
        if (!is_finite(p)) throw InvalidInput("kernel_matrix: non-finite coordinate");
    Eigen::MatrixXd k(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j)
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spec(xs[i], ys[j]);
    return k;
}

// ---------------------------------------------------------------------------

namespace {

bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt, double max_diag) {
    if (llt.info() != Eigen::Success) return false;
    const auto d = llt.matrixLLT().diagonal();
    if (!d.allFinite()) return false;
    // A pivot this small means the matrix is singular to working precision.
    const double tiny = static_cast<double>(d.size()) * std::numeric_limits<double>::epsilon() * max_diag;
    return (d.array().square() > tiny).all();
}

}  // namespace

SpdFactor factorize_spd(const Eigen::MatrixXd& a, double base_level, std::optional<double> scale) {
    if (a.rows() != a.cols()) throw InvalidInput("factorize_spd: matrix is not square");
    const auto n = a.rows();
    if (n == 0) return SpdFactor{Eigen::LLT<Eigen::MatrixXd>(a), base_level, 0.0};

    double s = scale.value_or(a.diagonal().mean());
    if (!(s > 0.0) || !std::isfinite(s)) s = 1.0;

    std::vector<double> levels{base_level};
    for (double l : kJitterLadder)
        if (l > base_level) levels.push_back(l);

    double last = base_level;
    for (double level : levels) {
        last = level;
        const double added = level * s;
        Eigen::MatrixXd m = a;
        m.diagonal().array() += added;
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (factor_ok(llt, m.diagonal().cwiseAbs().maxCoeff()))
            return SpdFactor{std::move(llt), level, added};
    }
    std::ostringstream os;
    os << "matrix of size " << n << " is not positive definite after relative jitter " << last;
    throw DegeneracyError(os.str(), last);
}

// ---------------------------------------------------------------------------

Conditioner::Conditioner(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log)
    : mean_(mean), kernel_(kernel), log_(log) {
    kernel_.validate();
    mean_.validate();
    if (log_.empty()) return;

    const auto ys = log_.locations();
    Eigen::MatrixXd a = kernel_matrix(kernel_, ys, ys);
    const double s2 = log_.noise_sd() * log_.noise_sd();
    a.diagonal().array() += s2;
    factor_ = factorize_spd(a, kernel_.jitter);

    Eigen::VectorXd resid(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < ys.size(); ++i)
        resid(static_cast<Eigen::Index>(i)) = log_.values()[i] - mean_(ys[i]);
    alpha_ = factor_->llt.solve(resid);
}

Eigen::MatrixXd Conditioner::whiten(std::span<const Location> xs) const {
    Eigen::MatrixXd kyx = kernel_matrix(kernel_, log_.locations(), xs);
    factor_->llt.matrixL().solveInPlace(kyx);
    return kyx;
}

Eigen::VectorXd Conditioner::posterior_mean(std::span<const Location> xs) const {
    Eigen::VectorXd mu(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) mu(static_cast<Eigen::Index>(i)) = mean_(xs[i]);
    if (!factor_) return mu;
    mu.noalias() += kernel_matrix(kernel_, xs, log_.locations()) * alpha_;
    return mu;
}

Eigen::MatrixXd Conditioner::posterior_cov(std::span<const Location> xs,
                                           std::span<const Location> ys) const {
    Eigen::MatrixXd k = kernel_matrix(kernel_, xs, ys);
    if (!factor_) return k;
    const Eigen::MatrixXd wx = whiten(xs);
    const Eigen::MatrixXd wy = whiten(ys);
    k.noalias() -= wx.transpose() * wy;
    return k;
}

GaussianBelief Conditioner::belief(std::span<const Location> query) const {
    if (query.empty()) throw InvalidInput("posterior: query set is empty");
    Eigen::MatrixXd cov = kernel_matrix(kernel_, query, query);
    if (factor_) {
        const Eigen::MatrixXd w = whiten(query);
        cov.noalias() -= w.transpose() * w;
    }
    cov = 0.5 * (cov + cov.transpose()).eval();
    return GaussianBelief(std::vector<Location>(query.begin(), query.end()), posterior_mean(query),
                          std::move(cov));
}

Predictive Conditioner::predictive(const Location& candidate, bool include_noise) const {
    if (!is_finite(candidate)) throw InvalidInput("predictive: non-finite candidate");
    const double prior_var = kernel_(candidate, candidate);
    Predictive out{mean_(candidate), prior_var};
    if (factor_) {
        const std::span<const Location> c(&candidate, 1);
        const Eigen::MatrixXd w = whiten(c);
        out.mean += (kernel_matrix(kernel_, c, log_.locations()) * alpha_)(0);
        out.variance = prior_var - w.squaredNorm();
    }
    if (out.variance < 0.0) {
        if (out.variance >= -1e-10 * prior_var) {
            out.variance = 0.0;
        } else {
            throw DegeneracyError("predictive variance is negative beyond round-off", jitter_level());
        }
    }
    if (include_noise) out.variance += log_.noise_sd() * log_.noise_sd();
    return out;
}

GaussianBelief posterior(const MeanSpec& mean, const KernelSpec& kernel, const MeasurementLog& log,
                         std::span<const Location> query) {
    return Conditioner(mean, kernel, log).belief(query);
}

Predictive predictive_measurement(const MeanSpec& mean, const KernelSpec& kernel,
                                  const MeasurementLog& log, const Location& candidate,
                                  bool include_noise) {
    return Conditioner(mean, kernel, log).predictive(candidate, include_noise);
}

Eigen::VectorXd sample_prior_field(const MeanSpec& mean, const KernelSpec& kernel,
                                   std::span<const Location> grid, std::uint64_t seed) {
    if (grid.empty()) throw InvalidInput("sample_prior_field: grid is empty");
    kernel.validate();
    mean.validate();
    const Eigen::MatrixXd k = kernel_matrix(kernel, grid, grid);
    const SpdFactor f = factorize_spd(k, kernel.jitter);

    Rng rng(seed);
    Eigen::VectorXd eps(static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = rng.normal();

    Eigen::VectorXd out = f.llt.matrixL() * eps;
    for (std::size_t i = 0; i < grid.size(); ++i) out(static_cast<Eigen::Index>(i)) += mean(grid[i]);
    return out;
}

}  // namespace infoplan
